#pragma once

// Sampled verification of maps between domains and brute-force oracles for
// the exact deciders. Every check is deterministic in its seed; per-level
// sample streams are split with derive_seed.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holomap/domains.hpp"
#include "holomap/error.hpp"
#include "holomap/existence.hpp"
#include "holomap/maps.hpp"
#include "holomap/random.hpp"

namespace holomap {

inline constexpr double roundtrip_tolerance = 1e-9;
inline constexpr double escape_threshold = 1e-2;
inline constexpr double compact_gap_floor = 0.2;
inline constexpr double compact_image_floor = 1e-6;
inline constexpr double monotone_slack = 2.0;

struct EscapeLevel {
  double eps = 0.0;
  double max_target_gap = 0.0;
  friend bool operator==(const EscapeLevel&, const EscapeLevel&) = default;
};

using EscapeProfile = std::vector<EscapeLevel>;

struct WorstCase {
  ComplexPoint point;
  double value = 0.0;
  friend bool operator==(const WorstCase&, const WorstCase&) = default;
};

struct VerificationReport {
  std::string kind;
  bool passed = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  WorstCase worst_case;
  std::optional<EscapeProfile> levels;
  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

using PointMap = std::function<ComplexPoint(const ComplexPoint&)>;

/// Non-increasing up to a factor `monotone_slack` per step, finest level below
/// `escape_threshold`. Non-finite entries fail.
inline bool profile_escapes(const EscapeProfile& profile) {
  if (profile.empty()) return false;
  for (const auto& lv : profile)
    if (!std::isfinite(lv.max_target_gap)) return false;
  for (std::size_t i = 1; i < profile.size(); ++i)
    if (profile[i].max_target_gap > monotone_slack * profile[i - 1].max_target_gap) return false;
  return profile.back().max_target_gap <= escape_threshold;
}

/// Dyadic escape levels eps_i = 2^-i, i = 4 .. 3 + levels.
inline std::vector<double> dyadic_levels(std::size_t levels) {
  std::vector<double> out;
  for (std::size_t i = 4; i < 4 + levels; ++i) out.push_back(std::ldexp(1.0, -static_cast<int>(i)));
  return out;
}

namespace detail {

inline void require_chain(const Domain& src, const Domain& dst) {
  if (dimension(src) != dimension(dst))
    throw Error(ErrorCode::dimension_mismatch, to_string(src) + " and " + to_string(dst) + " differ in dimension");
}

inline PointMap as_point_map(const MapExpr& f, const Domain& src) {
  if (f.dim() && *f.dim() != dimension(src))
    throw Error(ErrorCode::dimension_mismatch, "map dimension does not match " + to_string(src));
  return [f](const ComplexPoint& x) { return eval(f, x); };
}

/// Image of x, or nullopt when evaluation leaves its domain or is not finite.
inline std::optional<ComplexPoint> try_apply(const PointMap& f, const ComplexPoint& x) {
  ComplexPoint y;
  try {
    y = f(x);
  } catch (const Error&) {
    return std::nullopt;
  }
  for (auto c : y)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return std::nullopt;
  return y;
}

inline double target_min_gap(const Domain& dst, const std::optional<ComplexPoint>& y) {
  if (!y || y->size() != dimension(dst)) return std::numeric_limits<double>::infinity();
  return min_gap(dst, *y);
}

inline std::vector<StratumTag> strata_of(const Domain& d) {
  if (std::holds_alternative<Ellipsoid>(d)) return {StratumTag::ellipsoid_boundary};
  return {StratumTag::hartogs_K, StratumTag::hartogs_L};
}

inline double distance(const ComplexPoint& a, const ComplexPoint& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a[j] - b[j]);
  return std::sqrt(s);
}

/// Per-eps maxima of target min-gap over samples spread across the strata of src.
struct EscapeScan {
  EscapeProfile profile;
  WorstCase finest;
  std::size_t samples = 0;
};

inline EscapeScan escape_scan(const PointMap& f, const Domain& src, const Domain& dst, const std::vector<double>& eps,
                              std::size_t per_level, std::uint64_t seed) {
  EscapeScan scan;
  const auto tags = strata_of(src);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    EscapeLevel lv{eps[i], -std::numeric_limits<double>::infinity()};
    WorstCase worst{{}, lv.max_target_gap};
    for (std::size_t t = 0; t < tags.size(); ++t) {
      std::size_t count = per_level / tags.size() + (t < per_level % tags.size() ? 1 : 0);
      if (count == 0) continue;
      auto pts = sample_near_stratum(src, tags[t], eps[i], count, derive_seed(seed, i * tags.size() + t));
      for (const auto& x : pts) {
        double g = target_min_gap(dst, try_apply(f, x));
        if (!(g <= lv.max_target_gap)) {  // NaN-safe: a NaN gap becomes the max
          lv.max_target_gap = std::isnan(g) ? std::numeric_limits<double>::infinity() : g;
          worst = {x, lv.max_target_gap};
        }
        ++scan.samples;
      }
    }
    scan.profile.push_back(lv);
    scan.finest = worst;
  }
  return scan;
}

}  // namespace detail

// ---- range membership -------------------------------------------------------

/// All sampled interior points of src land in the interior of dst. worst_case
/// is the sample with the smallest target interior margin.
inline VerificationReport check_into(const PointMap& f, const Domain& src, const Domain& dst, std::size_t n,
                                     std::uint64_t seed) {
  detail::require_chain(src, dst);
  VerificationReport rep;
  rep.kind = "into";
  rep.seed = seed;
  rep.tolerances = {{"interior_floor", interior_floor}};
  rep.worst_case.value = std::numeric_limits<double>::infinity();
  for (const auto& x : sample_interior(src, n, seed)) {
    auto y = detail::try_apply(f, x);
    double g = y && y->size() == dimension(dst) ? interior_margin(dst, *y) : -std::numeric_limits<double>::infinity();
    if (std::isnan(g)) g = -std::numeric_limits<double>::infinity();
    if (g < rep.worst_case.value || rep.samples == 0) rep.worst_case = {x, g};
    ++rep.samples;
  }
  rep.passed = rep.worst_case.value > interior_floor;
  return rep;
}

inline VerificationReport check_into(const MapExpr& f, const Domain& src, const Domain& dst, std::size_t n,
                                     std::uint64_t seed) {
  return check_into(detail::as_point_map(f, src), src, dst, n, seed);
}

// ---- properness -------------------------------------------------------------

/// Boundary escape over dyadic bands plus a compactness spot-check. levels holds
/// the escape profile; worst_case holds the interior sample (source min-gap at
/// least 0.2) with the smallest target min-gap.
inline VerificationReport check_properness(const PointMap& f, const Domain& src, const Domain& dst,
                                           std::size_t levels, std::size_t per_level, std::uint64_t seed) {
  detail::require_chain(src, dst);
  if (levels == 0 || per_level == 0)
    throw Error(ErrorCode::precondition_violated, "properness needs at least one level and one sample per level");
  VerificationReport rep;
  rep.kind = "proper";
  rep.seed = seed;
  rep.tolerances = {{"escape_threshold", escape_threshold},
                    {"monotone_slack", monotone_slack},
                    {"compact_gap_floor", compact_gap_floor},
                    {"compact_image_floor", compact_image_floor}};
  auto scan = detail::escape_scan(f, src, dst, dyadic_levels(levels), per_level, seed);
  rep.samples = scan.samples;
  rep.levels = scan.profile;

  rep.worst_case.value = std::numeric_limits<double>::infinity();
  bool have_compact = false;
  for (const auto& x : sample_interior(src, per_level, derive_seed(seed, 0xC0C0))) {
    ++rep.samples;
    if (min_gap(src, x) < compact_gap_floor) continue;
    auto y = detail::try_apply(f, x);
    double g = y && y->size() == dimension(dst) ? min_gap(dst, *y) : -std::numeric_limits<double>::infinity();
    if (std::isnan(g)) g = -std::numeric_limits<double>::infinity();
    if (!have_compact || g < rep.worst_case.value) rep.worst_case = {x, g};
    have_compact = true;
  }
  rep.passed = profile_escapes(*rep.levels) && rep.worst_case.value >= compact_image_floor;
  return rep;
}

inline VerificationReport check_properness(const MapExpr& f, const Domain& src, const Domain& dst,
                                           std::size_t levels, std::size_t per_level, std::uint64_t seed) {
  return check_properness(detail::as_point_map(f, src), src, dst, levels, per_level, seed);
}

// ---- automorphisms ----------------------------------------------------------

/// Round trip through a supplied inverse; worst_case is the largest
/// ||g(f(x)) - x||, or +inf for a sample whose image leaves D.
inline VerificationReport check_aut(const PointMap& f, const PointMap& inverse, const Domain& d, std::size_t n,
                                    std::uint64_t seed) {
  VerificationReport rep;
  rep.kind = "aut";
  rep.seed = seed;
  rep.tolerances = {{"roundtrip", roundtrip_tolerance}, {"interior_floor", interior_floor}};
  rep.worst_case.value = 0.0;
  bool first = true;
  for (const auto& x : sample_interior(d, n, seed)) {
    ++rep.samples;
    double err = std::numeric_limits<double>::infinity();
    auto y = detail::try_apply(f, x);
    if (y && y->size() == x.size() && is_interior(d, *y)) {
      auto back = detail::try_apply(inverse, *y);
      if (back && back->size() == x.size()) err = detail::distance(*back, x);
    }
    if (std::isnan(err)) err = std::numeric_limits<double>::infinity();
    if (first || err > rep.worst_case.value) rep.worst_case = {x, err};
    first = false;
  }
  rep.passed = rep.worst_case.value <= roundtrip_tolerance;
  return rep;
}

inline VerificationReport check_aut(const MapExpr& f, const Domain& d, std::size_t n, std::uint64_t seed) {
  auto g = invert_aut(f);
  auto fd = detail::as_point_map(f, d);
  return check_aut(fd, detail::as_point_map(g, d), d, n, seed);
}

// ---- stratum preservation ---------------------------------------------------

struct StratumProfiles {
  EscapeProfile k;
  EscapeProfile l;
  WorstCase worst_k;
  WorstCase worst_l;
  std::size_t samples = 0;
};

/// For each eps, the largest image gap to K~ over samples near K, and to L~
/// over samples near L. Works for any m; only m >= 2 is asserted elsewhere.
inline StratumProfiles stratum_profiles(const PointMap& f, const HartogsTriangle& src, const HartogsTriangle& dst,
                                        const std::vector<double>& eps, std::size_t n, std::uint64_t seed) {
  if (src.dim() != dst.dim()) throw Error(ErrorCode::dimension_mismatch, "source and target differ in dimension");
  StratumProfiles out;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    for (int which = 0; which < 2; ++which) {
      const StratumTag tag = which == 0 ? StratumTag::hartogs_K : StratumTag::hartogs_L;
      EscapeLevel lv{eps[i], -std::numeric_limits<double>::infinity()};
      WorstCase worst{{}, lv.max_target_gap};
      for (const auto& x : sample_near_stratum(src, tag, eps[i], n, derive_seed(seed, 2 * i + which))) {
        ++out.samples;
        auto y = detail::try_apply(f, x);
        double g = std::numeric_limits<double>::infinity();
        if (y && y->size() == dst.dim()) {
          auto gaps = gaps_hartogs(dst, *y);
          // distance-to-stratum proxy: |gap|, so overshooting the stratum also counts
          g = std::abs(which == 0 ? gaps.k : gaps.l);
        }
        if (std::isnan(g)) g = std::numeric_limits<double>::infinity();
        if (g > lv.max_target_gap) {
          lv.max_target_gap = g;
          worst = {x, g};
        }
      }
      (which == 0 ? out.k : out.l).push_back(lv);
      (which == 0 ? out.worst_k : out.worst_l) = worst;
    }
  }
  return out;
}

inline StratumProfiles stratum_profiles(const MapExpr& f, const HartogsTriangle& src, const HartogsTriangle& dst,
                                        const std::vector<double>& eps, std::size_t n, std::uint64_t seed) {
  return stratum_profiles(detail::as_point_map(f, Domain(src)), src, dst, eps, n, seed);
}

/// Samples near K (resp. L) map near K~ (resp. L~). levels records, for each
/// eps, the larger of the two per-stratum maxima; the check passes iff that
/// combined profile escapes.
inline VerificationReport check_stratum_preservation(const PointMap& f, const HartogsTriangle& src,
                                                     const HartogsTriangle& dst, const std::vector<double>& eps,
                                                     std::size_t n, std::uint64_t seed) {
  if (src.m() < 2 || dst.m() < 2)
    throw Error(ErrorCode::unsupported_dimension, "stratum preservation is only asserted for m >= 2");
  if (eps.empty() || n == 0) throw Error(ErrorCode::precondition_violated, "need at least one eps and one sample");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (!(eps[i] < eps[i - 1])) throw Error(ErrorCode::precondition_violated, "eps list must be strictly decreasing");
  auto prof = stratum_profiles(f, src, dst, eps, n, seed);
  VerificationReport rep;
  rep.kind = "strata";
  rep.seed = seed;
  rep.samples = prof.samples;
  rep.tolerances = {{"escape_threshold", escape_threshold}, {"monotone_slack", monotone_slack}};
  EscapeProfile combined;
  for (std::size_t i = 0; i < eps.size(); ++i)
    combined.push_back({eps[i], std::max(prof.k[i].max_target_gap, prof.l[i].max_target_gap)});
  rep.worst_case = prof.worst_k.value >= prof.worst_l.value ? prof.worst_k : prof.worst_l;
  rep.levels = combined;
  rep.passed = profile_escapes(combined);
  return rep;
}

inline VerificationReport check_stratum_preservation(const MapExpr& f, const HartogsTriangle& src,
                                                     const HartogsTriangle& dst, const std::vector<double>& eps,
                                                     std::size_t n, std::uint64_t seed) {
  return check_stratum_preservation(detail::as_point_map(f, Domain(src)), src, dst, eps, n, seed);
}

// ---- oracles ----------------------------------------------------------------

namespace oracle {

inline constexpr std::size_t max_permutation_size = 7;
inline constexpr std::uint64_t max_congruence_bound = 100;
inline constexpr std::uint64_t max_divisor_product = 10000;

/// Every sigma with p_{sigma(j)} / q_j natural, by scanning all of S_n.
inline std::vector<Permutation> matchings(const ExponentVector& p, const ExponentVector& q) {
  detail::require_same_length(p, q);
  if (p.size() > max_permutation_size) throw Error(ErrorCode::instance_too_large, "oracle scans S_n only for n <= 7");
  std::vector<std::size_t> images(p.size());
  for (std::size_t i = 0; i < images.size(); ++i) images[i] = i;
  std::vector<Permutation> out;
  do {
    bool ok = true;
    for (std::size_t j = 0; j < images.size() && ok; ++j) ok = (p[images[j]] / q[j]).is_natural();
    if (ok) out.emplace_back(images);
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

/// (k, l) with l*qt/pt - k*q/p in Z, the smallest l first, then smallest k,
/// over 1 <= k, l <= bound.
inline std::optional<Hartogs11Witness> congruence(const ExactScalar& p, const ExactScalar& q, const ExactScalar& pt,
                                                  const ExactScalar& qt, std::uint64_t bound = max_congruence_bound) {
  if (bound > max_congruence_bound) throw Error(ErrorCode::instance_too_large, "oracle scans k, l <= 100 only");
  const ExactScalar rho = q / p;
  const ExactScalar rho_t = qt / pt;
  std::vector<ExactScalar> k_rho;
  k_rho.reserve(bound);
  for (std::uint64_t k = 1; k <= bound; ++k) k_rho.push_back(ExactScalar(static_cast<std::int64_t>(k)) * rho);
  for (std::uint64_t l = 1; l <= bound; ++l) {
    const ExactScalar l_rho_t = ExactScalar(static_cast<std::int64_t>(l)) * rho_t;
    for (std::uint64_t k = 1; k <= bound; ++k)
      if ((l_rho_t - k_rho[k - 1]).is_integer()) return Hartogs11Witness{k, l};
  }
  return std::nullopt;
}

/// Every r with p_{sigma(j)} / (q_j r_j) natural, by trying each r_j up to
/// p_{sigma(j)} / q_j.
inline std::vector<std::vector<std::uint64_t>> divisor_choices(const ExponentVector& p, const ExponentVector& q,
                                                               const Permutation& sigma) {
  detail::require_same_length(p, q);
  const auto ps = sigma.apply(p);
  std::vector<std::uint64_t> bounds;
  std::uint64_t product = 1;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    auto n = (ps[j] / q[j]).as_natural();
    if (!n) return {};
    if (*n > max_divisor_product || product * *n > max_divisor_product)
      throw Error(ErrorCode::instance_too_large, "oracle scans at most 10^4 candidate r");
    product *= *n;
    bounds.push_back(*n);
  }
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<std::uint64_t> r(ps.size(), 1);
  while (true) {
    bool ok = true;
    for (std::size_t j = 0; j < r.size() && ok; ++j)
      ok = (ps[j] / (q[j] * ExactScalar(static_cast<std::int64_t>(r[j])))).is_natural();
    if (ok) out.push_back(r);
    std::size_t j = r.size();
    while (j > 0) {
      --j;
      if (r[j] < bounds[j]) {
        ++r[j];
        break;
      }
      r[j] = 1;
      if (j == 0) return out;
    }
    if (r.empty()) return out;
  }
}

}  // namespace oracle

}  // namespace holomap
