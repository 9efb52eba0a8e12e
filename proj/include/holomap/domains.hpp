#pragma once

// Complex ellipsoids E_p and generalized Hartogs triangles F_{p,q} (one z
// coordinate), their defining gaps, boundary strata and seeded samplers.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "holomap/error.hpp"
#include "holomap/exactnum.hpp"
#include "holomap/random.hpp"

namespace holomap {

using ComplexPoint = std::vector<cplx>;

/// Interior points are required to clear every gap by this margin.
inline constexpr double interior_floor = 1e-12;

/// |z|^e evaluated as exp(e log|z|), with |0|^e = 0.
inline double abs_pow(cplx z, double e) {
  double r = std::abs(z);
  if (r == 0.0) return 0.0;
  return std::exp(e * std::log(r));
}

namespace detail {
inline std::vector<double> to_doubles(const std::vector<ExactScalar>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(x.to_double());
  return out;
}

inline void require_positive(const ExactScalar& x, const char* what) {
  if (x.sign() <= 0)
    throw Error(ErrorCode::non_positive_parameter, std::string(what) + " must be positive, got " + x.to_string());
}

inline std::string join_scalars(const std::vector<ExactScalar>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += xs[i].to_string();
  }
  return out;
}
}  // namespace detail

/// {sum |z_j|^{2 p_j} < 1}.
class Ellipsoid {
 public:
  explicit Ellipsoid(std::vector<ExactScalar> p) : p_(std::move(p)) {
    if (p_.empty()) throw Error(ErrorCode::dimension_mismatch, "ellipsoid needs at least one exponent");
    for (const auto& x : p_) detail::require_positive(x, "ellipsoid exponent");
    pf_ = detail::to_doubles(p_);
  }

  const std::vector<ExactScalar>& exponents() const { return p_; }
  const std::vector<double>& float_exponents() const { return pf_; }
  std::size_t dim() const { return p_.size(); }

  /// Number of coordinates with exponent exactly 1.
  std::size_t ball_block_size() const {
    std::size_t k = 0;
    for (const auto& x : p_) k += (x == ExactScalar(1));
    return k;
  }

  std::string to_string() const { return "E(" + detail::join_scalars(p_) + ")"; }

  friend bool operator==(const Ellipsoid& a, const Ellipsoid& b) { return a.p_ == b.p_; }

 private:
  std::vector<ExactScalar> p_;
  std::vector<double> pf_;
};

/// {|z|^{2p} < sum |w_j|^{2 q_j} < 1}; coordinates are ordered (z, w_1, ..., w_m).
class HartogsTriangle {
 public:
  HartogsTriangle(ExactScalar p, std::vector<ExactScalar> q) : p_(std::move(p)), q_(std::move(q)) {
    if (q_.empty()) throw Error(ErrorCode::dimension_mismatch, "Hartogs triangle needs at least one w exponent");
    detail::require_positive(p_, "Hartogs z exponent");
    for (const auto& x : q_) detail::require_positive(x, "Hartogs w exponent");
    pf_ = p_.to_double();
    qf_ = detail::to_doubles(q_);
  }

  const ExactScalar& p() const { return p_; }
  const std::vector<ExactScalar>& q() const { return q_; }
  double float_p() const { return pf_; }
  const std::vector<double>& float_q() const { return qf_; }
  std::size_t m() const { return q_.size(); }
  std::size_t dim() const { return 1 + q_.size(); }

  std::string to_string() const { return "F(" + p_.to_string() + ";" + detail::join_scalars(q_) + ")"; }

  friend bool operator==(const HartogsTriangle& a, const HartogsTriangle& b) { return a.p_ == b.p_ && a.q_ == b.q_; }

 private:
  ExactScalar p_;
  std::vector<ExactScalar> q_;
  double pf_;
  std::vector<double> qf_;
};

using Domain = std::variant<Ellipsoid, HartogsTriangle>;

enum class StratumTag { ellipsoid_boundary, hartogs_K, hartogs_L };

inline std::size_t dimension(const Domain& d) {
  return std::visit([](const auto& x) { return x.dim(); }, d);
}

inline std::string to_string(const Domain& d) {
  return std::visit([](const auto& x) { return x.to_string(); }, d);
}

namespace detail {
inline void require_dim(std::size_t expected, const ComplexPoint& x) {
  if (x.size() != expected)
    throw Error(ErrorCode::dimension_mismatch,
                "point has " + std::to_string(x.size()) + " coordinates, domain needs " + std::to_string(expected));
}

inline double weighted_sum(const std::vector<double>& exps, const cplx* z) {
  double s = 0.0;
  for (std::size_t j = 0; j < exps.size(); ++j) s += abs_pow(z[j], 2.0 * exps[j]);
  return s;
}
}  // namespace detail

/// 1 - sum |z_j|^{2 p_j}; positive exactly on the interior.
inline double gap_ellipsoid(const Ellipsoid& e, const ComplexPoint& z) {
  detail::require_dim(e.dim(), z);
  return 1.0 - detail::weighted_sum(e.float_exponents(), z.data());
}

struct HartogsGaps {
  double k;  // sum |w|^{2q} - |z|^{2p}
  double l;  // 1 - sum |w|^{2q}
  double w_level = 0.0;  // sum |w|^{2q}
};

inline HartogsGaps gaps_hartogs(const HartogsTriangle& f, const ComplexPoint& x) {
  detail::require_dim(f.dim(), x);
  double rho = detail::weighted_sum(f.float_q(), x.data() + 1);
  return {rho - abs_pow(x[0], 2.0 * f.float_p()), 1.0 - rho, rho};
}

/// Smallest defining gap; tends to 0 exactly when the point approaches the
/// boundary (for Hartogs triangles this includes the origin).
inline double min_gap(const Domain& d, const ComplexPoint& x) {
  if (const auto* e = std::get_if<Ellipsoid>(&d)) return gap_ellipsoid(*e, x);
  auto g = gaps_hartogs(std::get<HartogsTriangle>(d), x);
  return std::min(g.k, g.l);
}

/// Gaps scaled by the magnitude of the terms they compare: the K gap is taken
/// relative to sum |w|^{2q}, which shrinks near the origin. This is the
/// quantity the interior floor applies to, so that points of F near 0 whose
/// gaps are tiny in absolute terms still count as interior.
inline double interior_margin(const Domain& d, const ComplexPoint& x) {
  if (const auto* e = std::get_if<Ellipsoid>(&d)) return gap_ellipsoid(*e, x);
  auto g = gaps_hartogs(std::get<HartogsTriangle>(d), x);
  if (!(g.w_level > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::min(g.k / g.w_level, g.l);
}

inline bool is_interior(const Domain& d, const ComplexPoint& x, double floor = interior_floor) {
  return interior_margin(d, x) > floor;
}

namespace detail {
/// Point with prescribed sum |z_j|^{2 e_j} = level, split uniformly over the simplex.
inline void fill_level(const std::vector<double>& exps, double level, Rng& rng, cplx* out) {
  auto t = rng.simplex(exps.size());
  for (std::size_t j = 0; j < exps.size(); ++j) {
    double r = std::pow(level * t[j], 1.0 / (2.0 * exps[j]));
    out[j] = r * rng.phase();
  }
}

inline ComplexPoint hartogs_point(const HartogsTriangle& f, double rho_w, double s, Rng& rng) {
  ComplexPoint x(f.dim());
  fill_level(f.float_q(), rho_w, rng, x.data() + 1);
  x[0] = std::pow(s * rho_w, 1.0 / (2.0 * f.float_p())) * rng.phase();
  return x;
}

inline bool w_nonzero(const ComplexPoint& x) {
  for (std::size_t j = 1; j < x.size(); ++j)
    if (x[j] != cplx(0.0)) return true;
  return false;
}

constexpr std::size_t max_attempts_per_sample = 10000;
}  // namespace detail

inline std::vector<ComplexPoint> sample_interior(const Domain& d, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error(ErrorCode::precondition_violated, "sample count must be at least 1");
  Rng rng(seed);
  std::vector<ComplexPoint> out;
  out.reserve(count);
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > detail::max_attempts_per_sample * count)
      throw Error(ErrorCode::precondition_violated, "interior sampler exhausted its attempt budget");
    if (const auto* e = std::get_if<Ellipsoid>(&d)) {
      ComplexPoint z(e->dim());
      detail::fill_level(e->float_exponents(), rng.uniform_open(), rng, z.data());
      if (gap_ellipsoid(*e, z) > interior_floor) out.push_back(std::move(z));
    } else {
      const auto& f = std::get<HartogsTriangle>(d);
      double rho_w = rng.uniform_open();
      double s = rng.uniform();
      ComplexPoint x = detail::hartogs_point(f, rho_w, s, rng);
      if (is_interior(d, x) && detail::w_nonzero(x)) out.push_back(std::move(x));
    }
  }
  return out;
}

/// Interior points whose targeted gap lies in [eps/2, eps]; for Hartogs
/// strata the other gap stays at least 0.1.
inline std::vector<ComplexPoint> sample_near_stratum(const Domain& d, StratumTag tag, double eps, std::size_t count,
                                                     std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 0.25)) throw Error(ErrorCode::precondition_violated, "eps must lie in (0, 1/4)");
  if (count == 0) throw Error(ErrorCode::precondition_violated, "sample count must be at least 1");
  const bool is_ellipsoid = std::holds_alternative<Ellipsoid>(d);
  if (is_ellipsoid != (tag == StratumTag::ellipsoid_boundary))
    throw Error(ErrorCode::unsupported_stratum, "stratum tag does not belong to " + to_string(d));

  constexpr double other_gap = 0.1;
  const double lo = 0.5 * eps;
  const double hi = eps;
  Rng rng(seed);
  std::vector<ComplexPoint> out;
  out.reserve(count);
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > detail::max_attempts_per_sample * count)
      throw Error(ErrorCode::precondition_violated, "stratum sampler exhausted its attempt budget");
    double g = rng.uniform(lo, hi);
    if (tag == StratumTag::ellipsoid_boundary) {
      const auto& e = std::get<Ellipsoid>(d);
      ComplexPoint z(e.dim());
      detail::fill_level(e.float_exponents(), 1.0 - g, rng, z.data());
      double gap = gap_ellipsoid(e, z);
      if (gap >= lo && gap <= hi) out.push_back(std::move(z));
      continue;
    }
    const auto& f = std::get<HartogsTriangle>(d);
    double rho_w;
    double s;
    if (tag == StratumTag::hartogs_L) {
      rho_w = 1.0 - g;
      s = rng.uniform() * (1.0 - 1.001 * other_gap / rho_w);
    } else {
      // log-uniform level so that samples also approach the origin
      const double lo_rho = std::log(2.0 * hi);
      const double hi_rho = std::log(1.0 - 1.1 * other_gap);
      rho_w = std::exp(rng.uniform(lo_rho, hi_rho));
      s = 1.0 - g / rho_w;
    }
    ComplexPoint x = detail::hartogs_point(f, rho_w, s, rng);
    auto gaps = gaps_hartogs(f, x);
    double target = tag == StratumTag::hartogs_K ? gaps.k : gaps.l;
    double other = tag == StratumTag::hartogs_K ? gaps.l : gaps.k;
    if (target >= lo && target <= hi && other >= other_gap && detail::w_nonzero(x)) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace holomap
