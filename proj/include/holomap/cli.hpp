#pragma once

// Command-line front end. run() never throws for expected failures:
//   0  exists / passed / success
//   1  non-existence or failed verification (JSON report on stdout)
//   2  usage, parse or precondition error (JSON error on stderr)

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holomap/domains.hpp"
#include "holomap/error.hpp"
#include "holomap/existence.hpp"
#include "holomap/json.hpp"
#include "holomap/maps.hpp"
#include "holomap/parse.hpp"
#include "holomap/random_maps.hpp"
#include "holomap/verify.hpp"

namespace holomap::cli {

inline constexpr int exit_success = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

struct Options {
  bool json = true;
  std::vector<std::string> positional;
  std::string map;
  std::string kind = "into";
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::size_t levels = 12;
  bool automatic = false;
  bool random = false;
  std::string sigma;
  std::string r;
  std::uint64_t k = 0;
  std::uint64_t l = 0;
  std::string blaschke;
};

namespace detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string error_document(std::string_view code, const std::string& message,
                                  const ParseError* parse = nullptr) {
  json::Writer w;
  w.begin_object().key("error").begin_object();
  w.key("code").value(code).key("message").value(message);
  if (parse) {
    w.key("line").value(static_cast<std::uint64_t>(parse->position().line));
    w.key("column").value(static_cast<std::uint64_t>(parse->position().column));
    w.key("expected").value(parse->expected());
    w.key("found").value(parse->found());
  }
  w.end_object().end_object();
  return w.str();
}

/// "2,1" or "[2,1]" as naturals.
inline std::vector<std::uint64_t> parse_naturals(const std::string& text) {
  std::string_view s = text;
  std::size_t offset = 0;
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw ParseError({1, s.size() + 1}, "']'", "end of input");
    s = s.substr(1, s.size() - 2);
    offset = 1;
  }
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (true) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data() + pos, s.data() + s.size(), v);
    if (res.ec != std::errc() || v == 0)
      throw ParseError({1, offset + pos + 1}, "natural number >= 1",
                       pos < s.size() ? std::string(1, s[pos]) : "end of input");
    pos = static_cast<std::size_t>(res.ptr - s.data());
    out.push_back(v);
    if (pos == s.size()) return out;
    if (s[pos] != ',') throw ParseError({1, offset + pos + 1}, "','", std::string(1, s[pos]));
    ++pos;
  }
}

inline Permutation parse_sigma(const std::string& text) {
  auto xs = parse_naturals(text);
  return Permutation::from_one_based(std::vector<std::size_t>(xs.begin(), xs.end()));
}

inline void require_positionals(const Options& o, std::size_t lo, std::size_t hi, const char* what) {
  if (o.positional.size() < lo || o.positional.size() > hi) throw UsageError(std::string("expected ") + what);
}

inline ExistenceWitness decide(const Domain& src, const Domain& dst) {
  if (dimension(src) != dimension(dst)) throw Error(ErrorCode::dimension_mismatch, "domains differ in dimension");
  const auto* e = std::get_if<Ellipsoid>(&src);
  const auto* et = std::get_if<Ellipsoid>(&dst);
  if (e && et) return decide_ellipsoid(e->exponents(), et->exponents());
  const auto* f = std::get_if<HartogsTriangle>(&src);
  const auto* ft = std::get_if<HartogsTriangle>(&dst);
  if (!f || !ft) throw Error(ErrorCode::unsupported_dimension, "maps between an ellipsoid and a Hartogs triangle are not classified");
  if (f->m() == 1) return decide_hartogs_1_1(f->p(), f->q()[0], ft->p(), ft->q()[0]);
  return decide_hartogs_1_m(f->p(), f->q(), ft->p(), ft->q());
}

/// r_j = a_j / b_j, each required to be natural.
inline std::vector<std::uint64_t> quotients(const ExponentVector& a, const ExponentVector& b) {
  std::vector<std::uint64_t> out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    auto v = (a[j] / b[j]).as_natural();
    if (!v) throw Error(ErrorCode::precondition_violated, "quotient is not natural");
    out.push_back(*v);
  }
  return out;
}

inline MapExpr synthesize(const Options& o, const Domain& src, const Domain& dst, const ExistenceWitness& wit) {
  if (const auto* e = std::get_if<Ellipsoid>(&src)) {
    const auto& p = e->exponents();
    const auto& q = std::get<Ellipsoid>(dst).exponents();
    Permutation sigma = o.sigma.empty() ? std::get<EllipsoidWitness>(wit).sigma : parse_sigma(o.sigma);
    auto r = o.r.empty() ? quotients(sigma.apply(p), q) : parse_naturals(o.r);
    if (r.size() != p.size()) throw Error(ErrorCode::dimension_mismatch, "r must have length n");
    ExponentVector middle;
    for (std::size_t j = 0; j < p.size(); ++j)
      middle.push_back(sigma.apply(p)[j] / ExactScalar(static_cast<std::int64_t>(r[j])));
    return synth_ellipsoid_proper(p, q, sigma, r, identity_ellipsoid_aut(middle));
  }
  const auto& f = std::get<HartogsTriangle>(src);
  const auto& ft = std::get<HartogsTriangle>(dst);
  if (f.m() == 1) {
    const auto& w = std::get<Hartogs11Witness>(wit);
    const std::uint64_t kp = o.k ? o.k : w.k;
    const std::uint64_t l = o.l ? o.l : w.l;
    BlaschkeProduct b;
    if (!o.blaschke.empty()) b.zeros = parse_point(o.blaschke);
    return synth_hartogs_1_1_proper(f.p(), f.q()[0], ft.p(), ft.q()[0], kp, l, cplx(1.0), cplx(1.0), b);
  }
  const auto& w = std::get<Hartogs1mWitness>(wit);
  Permutation sigma = o.sigma.empty() ? w.sigma : parse_sigma(o.sigma);
  auto r = o.r.empty() ? quotients(sigma.apply(f.q()), ft.q()) : parse_naturals(o.r);
  if (r.size() != f.m()) throw Error(ErrorCode::dimension_mismatch, "r must have length m");
  std::size_t ones = 0;
  ExponentVector middle;
  for (std::size_t j = 0; j < f.m(); ++j) {
    middle.push_back(sigma.apply(f.q())[j] / ExactScalar(static_cast<std::int64_t>(r[j])));
    ones += middle.back() == ExactScalar(1);
  }
  const auto u = CMatrix::Identity(static_cast<Eigen::Index>(ones), static_cast<Eigen::Index>(ones));
  return synth_hartogs_1_m_proper(f.p(), f.q(), ft.p(), ft.q(), w.k, sigma, r, u,
                                  std::vector<cplx>(f.m() - ones, cplx(1.0)), cplx(1.0));
}

inline int emit_map(const Options& o, std::ostream& out, const MapExpr& f) {
  out << (o.json ? json::map_document(f) : format_map(f)) << '\n';
  return exit_success;
}

inline int cmd_exists(const Options& o, std::ostream& out) {
  require_positionals(o, 2, 2, "SRC DST");
  auto wit = decide(parse_domain(o.positional[0]), parse_domain(o.positional[1]));
  out << json::witness(wit) << '\n';
  return exists(wit) ? exit_success : exit_failure;
}

inline int cmd_synth(const Options& o, std::ostream& out) {
  require_positionals(o, 2, 2, "SRC DST");
  const bool explicit_params = !o.sigma.empty() || !o.r.empty() || o.k || o.l || !o.blaschke.empty();
  if (o.automatic && explicit_params) throw UsageError("--auto cannot be combined with explicit parameters");
  auto src = parse_domain(o.positional[0]);
  auto dst = parse_domain(o.positional[1]);
  auto wit = decide(src, dst);
  if (!exists(wit)) {
    out << json::witness(wit) << '\n';
    return exit_failure;
  }
  return emit_map(o, out, synthesize(o, src, dst, wit));
}

inline int cmd_eval(const Options& o, std::ostream& out) {
  require_positionals(o, 2, 2, "MAP POINT");
  auto f = parse_map(o.positional[0]);
  auto x = parse_point(o.positional[1]);
  auto y = eval(f, x);
  out << (o.json ? json::point_document(y) : format_point(y)) << '\n';
  return exit_success;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  require_positionals(o, 1, 2, "SRC [DST]");
  if (o.map.empty()) throw UsageError("verify needs --map");
  if (o.n == 0) throw UsageError("--n must be at least 1");
  auto f = parse_map(o.map);
  auto src = parse_domain(o.positional[0]);
  auto dst = o.positional.size() == 2 ? parse_domain(o.positional[1]) : src;
  VerificationReport rep;
  if (o.kind == "into") {
    rep = check_into(f, src, dst, o.n, o.seed);
  } else if (o.kind == "proper") {
    if (o.levels == 0) throw UsageError("--levels must be at least 1");
    rep = check_properness(f, src, dst, o.levels, o.n, o.seed);
  } else if (o.kind == "aut") {
    if (!(src == dst)) throw UsageError("an automorphism check takes a single domain");
    rep = check_aut(f, src, o.n, o.seed);
  } else if (o.kind == "strata") {
    const auto* hs = std::get_if<HartogsTriangle>(&src);
    const auto* ht = std::get_if<HartogsTriangle>(&dst);
    if (!hs || !ht) throw UsageError("stratum checks need Hartogs triangles");
    if (o.levels == 0) throw UsageError("--levels must be at least 1");
    rep = check_stratum_preservation(f, *hs, *ht, dyadic_levels(o.levels), o.n, o.seed);
  } else {
    throw UsageError("unknown --kind '" + o.kind + "'");
  }
  out << json::report(rep) << '\n';
  return rep.passed ? exit_success : exit_failure;
}

inline int cmd_aut(const Options& o, std::ostream& out) {
  require_positionals(o, 1, 1, "DOMAIN");
  auto d = parse_domain(o.positional[0]);
  if (!o.random) return emit_map(o, out, identity_automorphism(d));
  Rng rng(o.seed);
  return emit_map(o, out, random_automorphism(d, rng));
}

inline int cmd_compose(const Options& o, std::ostream& out) {
  require_positionals(o, 1, SIZE_MAX, "MAP...");
  Compose c;
  for (const auto& text : o.positional) c.maps.push_back(parse_map(text));
  return emit_map(o, out, MapExpr::make(std::move(c)));
}

inline int cmd_print(const Options& o, std::ostream& out) {
  require_positionals(o, 1, 1, "MAP");
  return emit_map(o, out, parse_map(o.positional[0]));
}

}  // namespace detail

/// Runs one invocation; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proper holomorphic maps between complex ellipsoids and generalized Hartogs triangles", "holomap"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json,!--no-json", o.json, "JSON output (default on)");

  // Positional arguments are collected as extras: CLI11 would otherwise split
  // bracketed values such as [0.5,0.9] into several entries.
  auto positional = [&](CLI::App* sub, const char* what) {
    sub->allow_extras();
    sub->add_flag("--json,!--no-json", o.json, "JSON output (default on)");
    sub->footer(std::string("Arguments: ") + what);
  };

  auto* exists_cmd = app.add_subcommand("exists", "decide whether a proper map SRC -> DST exists");
  positional(exists_cmd, "SRC DST");

  auto* synth_cmd = app.add_subcommand("synth", "synthesize a proper map SRC -> DST");
  positional(synth_cmd, "SRC DST");
  synth_cmd->add_flag("--auto", o.automatic, "canonical parameters: minimal witness, trivial automorphisms");
  synth_cmd->add_option("--sigma", o.sigma, "permutation, 1-based, e.g. 2,1");
  synth_cmd->add_option("--r", o.r, "power split r, e.g. 1,2");
  synth_cmd->add_option("--k", o.k, "z exponent k' (one w coordinate)");
  synth_cmd->add_option("--l", o.l, "w exponent l (one w coordinate)");
  synth_cmd->add_option("--blaschke", o.blaschke, "Blaschke zeros, e.g. [0.5]");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate MAP at POINT");
  positional(eval_cmd, "MAP POINT");

  auto* verify_cmd = app.add_subcommand("verify", "sampled verification of --map on SRC [DST]");
  positional(verify_cmd, "SRC [DST]");
  verify_cmd->add_option("--kind", o.kind, "into | proper | aut | strata")
      ->check(CLI::IsMember({"into", "proper", "aut", "strata"}));
  verify_cmd->add_option("--map", o.map, "map expression");
  verify_cmd->add_option("--n", o.n, "samples (per level for proper and strata)");
  verify_cmd->add_option("--seed", o.seed, "RNG seed");
  verify_cmd->add_option("--levels", o.levels, "dyadic levels for proper and strata");

  auto* aut_cmd = app.add_subcommand("aut", "automorphism of DOMAIN (identity, or --random)");
  positional(aut_cmd, "DOMAIN");
  aut_cmd->add_flag("--random", o.random, "draw a random element");
  aut_cmd->add_option("--seed", o.seed, "RNG seed");

  auto* compose_cmd = app.add_subcommand("compose", "compose MAP... right to left");
  positional(compose_cmd, "MAP...");

  auto* print_cmd = app.add_subcommand("print", "print MAP in canonical form");
  positional(print_cmd, "MAP");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_success;
  } catch (const CLI::ParseError& e) {
    err << detail::error_document("UsageError", e.what()) << '\n';
    return exit_usage;
  }

  for (auto* sub : app.get_subcommands()) {
    for (auto& extra : sub->remaining()) {
      if (extra.size() > 1 && extra[0] == '-' && !std::isdigit(static_cast<unsigned char>(extra[1]))) {
        err << detail::error_document("UsageError", "unknown option " + extra) << '\n';
        return exit_usage;
      }
      o.positional.push_back(extra);
    }
  }

  try {
    if (exists_cmd->parsed()) return detail::cmd_exists(o, out);
    if (synth_cmd->parsed()) return detail::cmd_synth(o, out);
    if (eval_cmd->parsed()) return detail::cmd_eval(o, out);
    if (verify_cmd->parsed()) return detail::cmd_verify(o, out);
    if (aut_cmd->parsed()) return detail::cmd_aut(o, out);
    if (compose_cmd->parsed()) return detail::cmd_compose(o, out);
    if (print_cmd->parsed()) return detail::cmd_print(o, out);
  } catch (const ParseError& e) {
    err << detail::error_document(to_string(e.code()), e.what(), &e) << '\n';
    return exit_usage;
  } catch (const Error& e) {
    err << detail::error_document(to_string(e.code()), e.what()) << '\n';
    return exit_usage;
  } catch (const detail::UsageError& e) {
    err << detail::error_document("UsageError", e.what()) << '\n';
    return exit_usage;
  }
  err << detail::error_document("UsageError", "no subcommand") << '\n';
  return exit_usage;
}

}  // namespace holomap::cli
