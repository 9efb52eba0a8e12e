// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "holomap/cli.hpp"
#include "holomap/parse.hpp"
#include "holomap/verify.hpp"
#include "support/generators.hpp"
#include "support/random_exprs.hpp"

using namespace holomap;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds, 0 = none
  std::function<Outcome()> body;
};

ExactScalar rat(std::int64_t n, std::int64_t d = 1) { return ExactScalar(Rational(BigInt(n), BigInt(d))); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

bool revalidates(const Permutation& sigma, const ExponentVector& p, const ExponentVector& q) {
  auto ps = sigma.apply(p);
  for (std::size_t j = 0; j < q.size(); ++j)
    if (!(ps[j] / q[j]).is_natural()) return false;
  return true;
}

bool congruence_holds(std::uint64_t k, std::uint64_t l, const testing::Hartogs11Instance& x) {
  return (ExactScalar(static_cast<std::int64_t>(l)) * x.qt / x.pt -
          ExactScalar(static_cast<std::int64_t>(k)) * x.q / x.p)
      .is_integer();
}

double sum_powers(const ComplexPoint& z, const ExponentVector& q) {
  double s = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) s += std::pow(std::abs(z[j]), 2.0 * q[j].to_double());
  return s;
}

Outcome matching_oracle() {
  Rng rng(1001);
  int disagreements = 0, found = 0;
  for (int i = 0; i < 200; ++i) {
    auto x = testing::random_ellipsoid_pair(rng);
    auto sigma = find_matching(x.p, x.q);
    auto all = oracle::matchings(x.p, x.q);
    if (sigma.has_value() != !all.empty() || (sigma && !revalidates(*sigma, x.p, x.q))) ++disagreements;
    found += sigma.has_value();
  }
  return {disagreements == 0,
          "200 pairs, " + std::to_string(found) + " with a witness, " + std::to_string(disagreements) + " disagreements"};
}

Outcome congruence_oracle() {
  Rng rng(1002);
  int disagreements = 0, rational = 0;
  for (int i = 0; i < 200; ++i) {
    auto x = testing::random_hartogs_1_1_instance(rng);
    auto w = decide_hartogs_1_1(x.p, x.q, x.pt, x.qt);
    auto scan = oracle::congruence(x.p, x.q, x.pt, x.qt);
    const auto* hw = std::get_if<Hartogs11Witness>(&w);
    bool ok;
    if (!hw) {
      ok = !scan;
    } else if (hw->k <= 100 && hw->l <= 100) {
      ok = scan && scan->k == hw->k && scan->l == hw->l;
    } else {
      // beyond the scan bound: the scan may only see lexicographically larger pairs
      ok = !scan || std::pair(hw->l, hw->k) < std::pair(scan->l, scan->k);
    }
    ok = ok && (!hw || congruence_holds(hw->k, hw->l, x));
    if ((x.q / x.p).is_rational() && (x.qt / x.pt).is_rational()) {
      ++rational;
      auto k = detail::require_u64((x.q / x.p).u().den(), "k");
      auto l = detail::require_u64((x.qt / x.pt).u().den(), "l");
      ok = ok && hw && congruence_holds(k, l, x);
    }
    disagreements += !ok;
  }
  auto refuted = decide_hartogs_1_1(rat(1), ExactScalar::sqrt2(), rat(1), rat(1));
  const bool nonexistence = std::holds_alternative<NonExistence>(refuted);
  return {disagreements == 0 && nonexistence,
          "200 instances (" + std::to_string(rational) + " rational), " + std::to_string(disagreements) +
              " disagreements; (1,s2,1,1) " + (nonexistence ? "refuted" : "NOT refuted")};
}

Outcome ellipsoid_synthesis() {
  Rng rng(1003);
  int failures = 0;
  double worst_final = 0.0;
  for (int i = 0; i < 50; ++i) {
    auto x = testing::random_ellipsoid_proper_instance(rng);
    auto f = testing::synthesize(x);
    Domain src = Ellipsoid(x.p), dst = Ellipsoid(x.q);
    auto into = check_into(f, src, dst, 10000, static_cast<std::uint64_t>(i));
    auto proper = check_properness(f, src, dst, 12, 200, static_cast<std::uint64_t>(i));
    worst_final = std::max(worst_final, proper.levels->back().max_target_gap);
    failures += !(into.passed && proper.passed);
  }
  return {failures == 0, "50 maps, " + std::to_string(failures) + " failures, worst final gap " +
                             fmt("%.3g", worst_final) + " (limit 1e-2)"};
}

Outcome automorphisms() {
  Rng rng(1004);
  int failures = 0;
  double worst_roundtrip = 0.0, worst_residual = 0.0;
  auto record = [&](const VerificationReport& rep) {
    failures += !rep.passed;
    worst_roundtrip = std::max(worst_roundtrip, rep.worst_case.value);
  };
  for (int i = 0; i < 50; ++i) {
    auto p = testing::random_aut_exponents(rng);
    auto f = random_ellipsoid_aut(p, rng);
    worst_residual = std::max(worst_residual, f.as<EllipsoidAut>()->h.matrix_residual());
    record(check_aut(f, Ellipsoid(p), 1000, static_cast<std::uint64_t>(i)));
  }
  for (int i = 0; i < 50; ++i) {
    auto d = testing::random_aut_hartogs(rng);
    record(check_aut(random_hartogs_aut(d, rng), d, 1000, static_cast<std::uint64_t>(i)));
  }
  for (int i = 0; i < 10; ++i) {
    auto p = testing::random_aut_exponents(rng);
    auto fg = compose(random_ellipsoid_aut(p, rng), random_ellipsoid_aut(p, rng));
    record(check_aut(fg, Ellipsoid(p), 1000, static_cast<std::uint64_t>(i)));
  }
  for (int i = 0; i < 50; ++i)
    worst_residual = std::max(worst_residual, random_ball_aut(static_cast<std::size_t>(rng.integer(1, 5)), rng, 0.95)
                                                  .matrix_residual());
  return {failures == 0 && worst_residual <= 1e-10,
          "110 automorphisms, " + std::to_string(failures) + " failures, worst round trip " +
              fmt("%.3g", worst_roundtrip) + " (limit 1e-9), worst residual " + fmt("%.3g", worst_residual) +
              " (limit 1e-10)"};
}

Outcome landucci() {
  auto f = synth_hartogs_1_1_proper(rat(2), rat(3), rat(2), rat(5), 3, 3, 1.0, 1.0,
                                    BlaschkeProduct::make(1.0, {cplx(0.5)}));
  Domain src = HartogsTriangle(rat(2), {rat(3)}), dst = HartogsTriangle(rat(2), {rat(5)});
  auto into = check_into(f, src, dst, 10000, 0);
  auto proper = check_properness(f, src, dst, 12, 200, 0);
  bool form = is_landucci_form(f, rat(2), rat(3), rat(2), rat(5));
  return {into.passed && proper.passed && !form,
          std::string("into ") + (into.passed ? "pass" : "fail") + ", proper " + (proper.passed ? "pass" : "fail") +
              " (final gap " + fmt("%.3g", proper.levels->back().max_target_gap) + "), landucci form " +
              (form ? "true" : "false")};
}

Outcome unitarity() {
  Rng rng(1006);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto x = testing::random_hartogs_1_m_instance(rng);
    auto f = testing::synthesize(x);
    const auto* node = f.as<HFpsProper>();
    if (!node) return {false, "synthesized map is not an hfps node"};
    const auto& inner = *node->inner;
    for (const auto& w : sample_interior(Ellipsoid(x.q), 1000, static_cast<std::uint64_t>(i)))
      worst = std::max(worst, std::abs(sum_powers(eval(inner, w), x.qt) - sum_powers(w, x.q)));
  }
  return {worst <= 1e-10, "20 maps x 1000 samples, worst defect " + fmt("%.3g", worst) + " (limit 1e-10)"};
}

Outcome strata() {
  Rng rng(1007);
  int failures = 0;
  double worst_k = 0.0, worst_l = 0.0;
  const auto eps = dyadic_levels(12);  // 2^-4 .. 2^-15
  for (int i = 0; i < 20; ++i) {
    auto x = testing::random_hartogs_1_m_instance(rng);
    auto f = testing::synthesize(x);
    HartogsTriangle src(x.p, x.q), dst(x.pt, x.qt);
    auto prof = stratum_profiles(f, src, dst, eps, 100, static_cast<std::uint64_t>(i));
    failures += !(profile_escapes(prof.k) && profile_escapes(prof.l));
    worst_k = std::max(worst_k, prof.k.back().max_target_gap);
    worst_l = std::max(worst_l, prof.l.back().max_target_gap);
  }
  return {failures == 0, "20 maps, " + std::to_string(failures) + " failures, finest K gap " + fmt("%.3g", worst_k) +
                             ", finest L gap " + fmt("%.3g", worst_l) + " (limit 1e-2)"};
}

Outcome determinism() {
  Rng rng(1008);
  int bad = 0;
  for (int i = 0; i < 500; ++i) {
    auto s = testing::random_scalar_any(rng);
    bad += !(parse_scalar(s.to_string()) == s);
    auto d = testing::random_domain(rng);
    bad += !(parse_domain(to_string(d)) == d);
    auto x = testing::random_point(rng);
    bad += !(parse_point(format_point(x)) == x);
    auto f = testing::random_map(rng);
    bad += !(parse_map(format_map(f)) == f);
  }
  const std::string ce = "h2prop(zeta=1,xi=1,kp=3,l=3,b=3,pp=2,qp=3,B=[0.5])";
  const std::vector<std::vector<std::string>> invocations = {
      {"exists", "E(4,6)", "E(2,3)"},
      {"synth", "--auto", "F(2;2,4)", "F(1;1,2)"},
      {"eval", ce, "[0.5,0.9]"},
      {"verify", "--kind=proper", "--map=" + ce, "F(2;3)", "F(2;5)", "--n=200", "--seed=7"},
      {"verify", "--map=" + ce, "F(2;3)", "F(2;5)", "--n=1000", "--seed=7"},
      {"aut", "E(1,1,2)", "--random", "--seed=3"},
  };
  int differing = 0;
  for (const auto& args : invocations) {
    std::ostringstream o1, e1, o2, e2;
    int c1 = cli::run(args, o1, e1);
    int c2 = cli::run(args, o2, e2);
    differing += !(c1 == c2 && o1.str() == o2.str() && e1.str() == e2.str());
  }
  return {bad == 0 && differing == 0, "4 grammars x 500 round trips, " + std::to_string(bad) + " mismatches; " +
                                          std::to_string(invocations.size()) + " invocations, " +
                                          std::to_string(differing) + " non-identical"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "matching decider vs full S_n scan", 10.0, matching_oracle},
      {2, "congruence decider vs (k,l) <= 100 scan", 5.0, congruence_oracle},
      {3, "ellipsoid proper maps: into + properness", 60.0, ellipsoid_synthesis},
      {4, "automorphism round trips and ball residuals", 30.0, automorphisms},
      {5, "counterexample on F(2;3) -> F(2;5)", 10.0, landucci},
      {6, "weighted norm preserved by inner maps", 0.0, unitarity},
      {7, "stratum preservation for m >= 2", 0.0, strata},
      {8, "grammar round trips and CLI determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = c.body();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = c.time_limit == 0.0 || secs < c.time_limit;
    bool ok = r.passed && in_time;
    failed += !ok;
    std::string limit = c.time_limit > 0.0 ? " / limit " + fmt("%.0f", c.time_limit) + "s" : "";
    std::printf("criterion %d %s: %s; %s [%.2fs%s]\n", c.id, ok ? "PASS" : "FAIL", c.title, r.detail.c_str(), secs,
                limit.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
