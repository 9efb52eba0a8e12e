#pragma once

// Algebraic representation of the classified map families: power maps,
// permutations, ball and ellipsoid automorphisms, the Hartogs-triangle proper
// maps and automorphisms, and compositions of these.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "holomap/detail/box.hpp"
#include "holomap/detail/text.hpp"
#include "holomap/domains.hpp"
#include "holomap/error.hpp"
#include "holomap/exactnum.hpp"
#include "holomap/existence.hpp"

namespace holomap {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double unimodular_tolerance = 1e-12;
inline constexpr double unitary_tolerance = 1e-12;

namespace detail {
inline void require_unimodular(cplx z, const char* what) {
  if (std::abs(std::abs(z) - 1.0) > unimodular_tolerance)
    throw Error(ErrorCode::not_unimodular, std::string(what) + " = " + format_complex(z) + " is not unimodular");
}

/// z^n for any integer n, by repeated squaring.
inline cplx ipow(cplx z, std::int64_t n) {
  if (n < 0) return cplx(1.0) / ipow(z, -n);
  cplx result(1.0);
  cplx base = z;
  auto e = static_cast<std::uint64_t>(n);
  while (e) {
    if (e & 1U) result *= base;
    base *= base;
    e >>= 1U;
  }
  return result;
}

inline bool matrices_equal(const CMatrix& a, const CMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

inline bool vectors_equal(const CVector& a, const CVector& b) {
  return a.size() == b.size() && (a.size() == 0 || a == b);
}

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
}  // namespace detail

/// B(t) = unimodular * prod (t - a_i) / (1 - conj(a_i) t).
struct BlaschkeProduct {
  cplx unimodular{1.0};
  std::vector<cplx> zeros;

  static BlaschkeProduct make(cplx unimodular, std::vector<cplx> zeros) {
    detail::require_unimodular(unimodular, "Blaschke constant");
    for (auto a : zeros)
      if (!(std::abs(a) < 1.0))
        throw Error(ErrorCode::not_in_ball, "Blaschke zero " + detail::format_complex(a) + " is not in the disk");
    return {unimodular, std::move(zeros)};
  }

  cplx operator()(cplx t) const {
    cplx out = unimodular;
    for (auto a : zeros) out *= (t - a) / (1.0 - std::conj(a) * t);
    return out;
  }

  bool is_constant() const { return zeros.empty(); }
  bool nonvanishing_at_zero() const {
    return std::none_of(zeros.begin(), zeros.end(), [](cplx a) { return a == cplx(0.0); });
  }

  friend bool operator==(const BlaschkeProduct&, const BlaschkeProduct&) = default;
};

/// H(z) = sqrt(1 - |a|^2) / (1 - <z, a>) * Q (z - a), with Q = U (I - a a*)^{-1/2}.
/// Q then satisfies conj(Q) (I - conj(a) a^T) Q^T = I, and Q = U when a = 0.
class BallAutomorphism {
 public:
  static BallAutomorphism make(CVector a, CMatrix u) {
    const auto k = a.size();
    if (u.rows() != k || u.cols() != k)
      throw Error(ErrorCode::dimension_mismatch, "U must be " + std::to_string(k) + "x" + std::to_string(k));
    if (!(a.squaredNorm() < 1.0)) throw Error(ErrorCode::not_in_ball, "center a must satisfy |a| < 1");
    if (k > 0 && detail::max_abs(u.adjoint() * u - CMatrix::Identity(k, k)) > unitary_tolerance)
      throw Error(ErrorCode::not_unitary, "U is not unitary");
    BallAutomorphism h;
    h.a_ = std::move(a);
    h.u_ = std::move(u);
    const double norm2 = h.a_.squaredNorm();
    h.s_ = std::sqrt(1.0 - norm2);
    CMatrix m = CMatrix::Identity(k, k);
    if (norm2 > 0.0) m += (1.0 / h.s_ - 1.0) * (h.a_ * h.a_.adjoint()) / norm2;
    h.q_ = h.u_ * m;
    return h;
  }

  static BallAutomorphism identity(std::size_t k) {
    return make(CVector::Zero(static_cast<Eigen::Index>(k)), CMatrix::Identity(k, k));
  }

  std::size_t dim() const { return static_cast<std::size_t>(a_.size()); }
  const CVector& a() const { return a_; }
  const CMatrix& u() const { return u_; }
  const CMatrix& q() const { return q_; }

  /// sqrt(1 - |a|^2) / (1 - <z, a>).
  cplx factor(const CVector& z) const { return s_ / (1.0 - a_.dot(z)); }

  CVector apply(const CVector& z) const { return factor(z) * (q_ * (z - a_)); }

  /// Inverse is the automorphism with center -U a and unitary U*.
  BallAutomorphism inverse() const { return make(-(u_ * a_), u_.adjoint()); }

  /// max |conj(Q) (I - conj(a) a^T) Q^T - I|.
  double matrix_residual() const {
    const auto k = a_.size();
    if (k == 0) return 0.0;
    CMatrix lhs = q_.conjugate() * (CMatrix::Identity(k, k) - a_.conjugate() * a_.transpose()) * q_.transpose();
    return detail::max_abs(lhs - CMatrix::Identity(k, k));
  }

  friend bool operator==(const BallAutomorphism& x, const BallAutomorphism& y) {
    return detail::vectors_equal(x.a_, y.a_) && detail::matrices_equal(x.u_, y.u_);
  }

 private:
  CVector a_;
  CMatrix u_;
  CMatrix q_;
  double s_ = 1.0;
};

inline BallAutomorphism make_ball_aut(CVector a, CMatrix u) { return BallAutomorphism::make(std::move(a), std::move(u)); }

class MapExpr;

/// z -> (z_1^{a_1}, ..., z_n^{a_n}) with natural exponents.
struct PowerMap {
  std::vector<std::uint64_t> exponents;
  friend bool operator==(const PowerMap&, const PowerMap&) = default;
};

/// z -> z_sigma.
struct Permute {
  Permutation sigma;
  friend bool operator==(const Permute&, const Permute&) = default;
};

struct BallAut {
  BallAutomorphism h;
  friend bool operator==(const BallAut&, const BallAut&) = default;
};

/// Automorphism of E_p: with y = z_sigma and y' the coordinates where p_j = 1,
///   F_j = H(y')_j                               if p_j = 1,
///   F_j = zeta_j y_j (sqrt(1-|a|^2)/(1-<y',a>))^{1/p_j}  otherwise,
/// where a is the center of H and zetas are listed in coordinate order.
struct EllipsoidAut {
  ExponentVector p;
  Permutation sigma;
  BallAutomorphism h;
  std::vector<cplx> zetas;

  std::vector<std::size_t> ball_block;  // indices with p_j = 1
  std::vector<std::size_t> rest_block;  // indices with p_j != 1
  std::vector<double> rest_inverse_exponents;

  friend bool operator==(const EllipsoidAut& x, const EllipsoidAut& y) {
    return x.p == y.p && x.sigma == y.sigma && x.h == y.h && x.zetas == y.zetas;
  }
};

/// (z, w) -> (zeta z^kp w^b B(z^pp w^-qp), xi w^l). pp = qp = 0 marks the
/// irrational branch, which carries no Blaschke factor.
struct H2Proper {
  cplx zeta{1.0};
  cplx xi{1.0};
  std::uint64_t kprime = 1;
  std::uint64_t l = 1;
  std::int64_t b = 0;
  std::uint64_t pprime = 0;
  std::uint64_t qprime = 0;
  BlaschkeProduct blaschke;
  friend bool operator==(const H2Proper&, const H2Proper&) = default;
};

/// (z, w) -> (w^s phi(z w^-s), xi w), phi(t) = e^{i theta} (t - alpha)/(1 - conj(alpha) t).
/// Without s (q/p not natural) alpha is 0 and the map is (e^{i theta} z, xi w).
struct H2Aut {
  cplx xi{1.0};
  std::optional<std::uint64_t> s;
  double theta = 0.0;
  cplx alpha{0.0};
  friend bool operator==(const H2Aut&, const H2Aut&) = default;
};

/// (z, w) -> (zeta z^k, h(w)) with h(0) = 0.
struct HFpsProper {
  cplx zeta{1.0};
  std::uint64_t k = 1;
  detail::Box<MapExpr> inner;
  friend bool operator==(const HFpsProper& x, const HFpsProper& y) {
    return x.zeta == y.zeta && x.k == y.k && x.inner == y.inner;
  }
};

/// Right-to-left composition; the empty list is the identity.
struct Compose {
  std::vector<MapExpr> maps;
  friend bool operator==(const Compose& x, const Compose& y);
};

/// A validated map expression. Every value of this type satisfies the
/// invariants of its node family; construction goes through make().
class MapExpr {
 public:
  using Node = std::variant<PowerMap, Permute, BallAut, EllipsoidAut, H2Proper, H2Aut, HFpsProper, Compose>;

  static MapExpr make(PowerMap node);
  static MapExpr make(Permute node);
  static MapExpr make(BallAut node);
  static MapExpr make(EllipsoidAut node);
  static MapExpr make(H2Proper node);
  static MapExpr make(H2Aut node);
  static MapExpr make(HFpsProper node);
  static MapExpr make(Compose node);

  static MapExpr identity() { return make(Compose{}); }

  const Node& node() const { return node_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

  /// Ambient dimension; empty for the empty composition, which acts on any dimension.
  std::optional<std::size_t> dim() const { return dim_; }

  friend bool operator==(const MapExpr& x, const MapExpr& y) { return x.node_ == y.node_; }

 private:
  MapExpr(Node node, std::optional<std::size_t> dim) : node_(std::move(node)), dim_(dim) {}
  Node node_;
  std::optional<std::size_t> dim_;
};

inline bool operator==(const Compose& x, const Compose& y) { return x.maps == y.maps; }

ComplexPoint eval(const MapExpr& f, const ComplexPoint& x);

namespace detail {
inline void require_dim(const MapExpr& f, const ComplexPoint& x) {
  if (f.dim() && *f.dim() != x.size())
    throw Error(ErrorCode::dimension_mismatch,
                "map acts on dimension " + std::to_string(*f.dim()) + ", point has " + std::to_string(x.size()));
}

inline void require_w_nonzero(const ComplexPoint& x) {
  if (x[1] == cplx(0.0)) throw Error(ErrorCode::domain_violation, "w = 0 is outside every Hartogs triangle");
}

inline ComplexPoint eval_node(const PowerMap& f, const ComplexPoint& x) {
  ComplexPoint out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = ipow(x[j], static_cast<std::int64_t>(f.exponents[j]));
  return out;
}

inline ComplexPoint eval_node(const Permute& f, const ComplexPoint& x) { return f.sigma.apply(x); }

inline CVector to_eigen(const ComplexPoint& x) {
  CVector v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) v[static_cast<Eigen::Index>(j)] = x[j];
  return v;
}

inline ComplexPoint from_eigen(const CVector& v) { return ComplexPoint(v.data(), v.data() + v.size()); }

inline ComplexPoint eval_node(const BallAut& f, const ComplexPoint& x) {
  CVector z = to_eigen(x);
  if (!(z.squaredNorm() < 1.0)) throw Error(ErrorCode::domain_violation, "ball automorphism evaluated outside the ball");
  return from_eigen(f.h.apply(z));
}

inline ComplexPoint eval_node(const EllipsoidAut& f, const ComplexPoint& x) {
  ComplexPoint y = f.sigma.apply(x);
  CVector ball(static_cast<Eigen::Index>(f.ball_block.size()));
  for (std::size_t i = 0; i < f.ball_block.size(); ++i) ball[static_cast<Eigen::Index>(i)] = y[f.ball_block[i]];
  if (!(ball.squaredNorm() < 1.0))
    throw Error(ErrorCode::domain_violation, "ball block of an ellipsoid automorphism has norm >= 1");
  ComplexPoint out(y.size());
  CVector image = f.h.apply(ball);
  for (std::size_t i = 0; i < f.ball_block.size(); ++i) out[f.ball_block[i]] = image[static_cast<Eigen::Index>(i)];
  const bool centered = f.h.a().size() == 0 || f.h.a().squaredNorm() == 0.0;
  const cplx m = centered ? cplx(1.0) : f.h.factor(ball);
  for (std::size_t i = 0; i < f.rest_block.size(); ++i) {
    const std::size_t j = f.rest_block[i];
    // Re m > 0 on the ball, so the principal branch is continuous there.
    cplx scale = centered ? cplx(1.0) : std::pow(m, f.rest_inverse_exponents[i]);
    out[j] = f.zetas[i] * y[j] * scale;
  }
  return out;
}

inline ComplexPoint eval_node(const H2Proper& f, const ComplexPoint& x) {
  require_w_nonzero(x);
  const cplx z = x[0];
  const cplx w = x[1];
  cplx first = f.zeta * ipow(z, static_cast<std::int64_t>(f.kprime)) * ipow(w, f.b);
  if (!f.blaschke.is_constant()) {
    cplx t = ipow(z, static_cast<std::int64_t>(f.pprime)) * ipow(w, -static_cast<std::int64_t>(f.qprime));
    first *= f.blaschke(t);
  }
  return {first, f.xi * ipow(w, static_cast<std::int64_t>(f.l))};
}

inline cplx disk_mobius(double theta, cplx alpha, cplx t) {
  return std::polar(1.0, theta) * (t - alpha) / (1.0 - std::conj(alpha) * t);
}

inline ComplexPoint eval_node(const H2Aut& f, const ComplexPoint& x) {
  const cplx z = x[0];
  const cplx w = x[1];
  if (!f.s) return {std::polar(1.0, f.theta) * z, f.xi * w};
  require_w_nonzero(x);
  const cplx ws = ipow(w, static_cast<std::int64_t>(*f.s));
  return {ws * disk_mobius(f.theta, f.alpha, z / ws), f.xi * w};
}

inline ComplexPoint eval_node(const HFpsProper& f, const ComplexPoint& x) {
  ComplexPoint w(x.begin() + 1, x.end());
  ComplexPoint hw = eval(*f.inner, w);
  ComplexPoint out;
  out.reserve(x.size());
  out.push_back(f.zeta * ipow(x[0], static_cast<std::int64_t>(f.k)));
  out.insert(out.end(), hw.begin(), hw.end());
  return out;
}

inline ComplexPoint eval_node(const Compose& f, const ComplexPoint& x) {
  ComplexPoint y = x;
  for (auto it = f.maps.rbegin(); it != f.maps.rend(); ++it) y = eval(*it, y);
  return y;
}
}  // namespace detail

/// Evaluates F at x; compositions are applied right to left.
inline ComplexPoint eval(const MapExpr& f, const ComplexPoint& x) {
  detail::require_dim(f, x);
  return std::visit([&](const auto& node) { return detail::eval_node(node, x); }, f.node());
}

// ---- validation -------------------------------------------------------------

inline MapExpr MapExpr::make(PowerMap node) {
  if (node.exponents.empty()) throw Error(ErrorCode::dimension_mismatch, "power map needs at least one exponent");
  for (auto e : node.exponents)
    if (e == 0) throw Error(ErrorCode::precondition_violated, "power map exponents must be natural numbers");
  auto n = node.exponents.size();
  return {std::move(node), n};
}

inline MapExpr MapExpr::make(Permute node) {
  if (node.sigma.size() == 0) throw Error(ErrorCode::dimension_mismatch, "empty permutation");
  auto n = node.sigma.size();
  return {std::move(node), n};
}

inline MapExpr MapExpr::make(BallAut node) {
  if (node.h.dim() == 0) throw Error(ErrorCode::dimension_mismatch, "ball automorphism of B_0");
  auto n = node.h.dim();
  return {std::move(node), n};
}

inline MapExpr MapExpr::make(EllipsoidAut node) {
  const std::size_t n = node.p.size();
  if (n == 0) throw Error(ErrorCode::dimension_mismatch, "ellipsoid automorphism needs n >= 1");
  detail::require_all_positive(node.p);
  if (node.sigma.size() != n || !stabilizes(node.sigma, node.p))
    throw Error(ErrorCode::not_a_stabilizer, "sigma does not fix the exponent vector");
  node.ball_block.clear();
  node.rest_block.clear();
  node.rest_inverse_exponents.clear();
  for (std::size_t j = 0; j < n; ++j) {
    if (node.p[j] == ExactScalar(1)) {
      node.ball_block.push_back(j);
    } else {
      node.rest_block.push_back(j);
      node.rest_inverse_exponents.push_back((ExactScalar(1) / node.p[j]).to_double());
    }
  }
  if (node.h.dim() != node.ball_block.size())
    throw Error(ErrorCode::dimension_mismatch, "ball automorphism must act on the " +
                                                   std::to_string(node.ball_block.size()) + " coordinates with p_j = 1");
  if (node.zetas.size() != node.rest_block.size())
    throw Error(ErrorCode::dimension_mismatch, "need one zeta per coordinate with p_j != 1");
  for (auto z : node.zetas) detail::require_unimodular(z, "zeta");
  return {std::move(node), n};
}

inline MapExpr MapExpr::make(H2Proper node) {
  detail::require_unimodular(node.zeta, "zeta");
  detail::require_unimodular(node.xi, "xi");
  detail::require_unimodular(node.blaschke.unimodular, "Blaschke constant");
  node.zeta *= node.blaschke.unimodular;
  node.blaschke.unimodular = cplx(1.0);
  if (node.l == 0) throw Error(ErrorCode::precondition_violated, "l must be a natural number");
  for (auto a : node.blaschke.zeros) {
    if (!(std::abs(a) < 1.0)) throw Error(ErrorCode::not_in_ball, "Blaschke zero outside the disk");
    if (a == cplx(0.0)) throw Error(ErrorCode::degenerate_blaschke, "Blaschke product must not vanish at 0");
  }
  const bool irrational_branch = node.pprime == 0 && node.qprime == 0;
  if (irrational_branch) {
    if (!node.blaschke.is_constant())
      throw Error(ErrorCode::branch_violated, "the irrational branch carries no Blaschke factor");
  } else if (node.pprime == 0 || node.qprime == 0 || std::gcd(node.pprime, node.qprime) != 1) {
    throw Error(ErrorCode::precondition_violated, "p', q' must be coprime natural numbers");
  }
  if (node.blaschke.is_constant() && node.kprime == 0)
    throw Error(ErrorCode::degenerate_blaschke, "constant Blaschke factor requires k' > 0");
  return {std::move(node), 2};
}

inline MapExpr MapExpr::make(H2Aut node) {
  detail::require_unimodular(node.xi, "xi");
  if (!(std::abs(node.alpha) < 1.0)) throw Error(ErrorCode::not_in_ball, "alpha must lie in the unit disk");
  if (!node.s && node.alpha != cplx(0.0))
    throw Error(ErrorCode::zero_fix_required, "phi(0) = 0 is required when q/p is not natural");
  if (node.s && *node.s == 0) throw Error(ErrorCode::precondition_violated, "s = q/p must be a natural number");
  return {std::move(node), 2};
}

inline MapExpr MapExpr::make(HFpsProper node) {
  detail::require_unimodular(node.zeta, "zeta");
  if (node.k == 0) throw Error(ErrorCode::precondition_violated, "k must be a natural number");
  auto m = node.inner->dim();
  if (!m) throw Error(ErrorCode::dimension_mismatch, "inner map must have a definite dimension");
  ComplexPoint origin(*m, cplx(0.0));
  ComplexPoint image = eval(*node.inner, origin);
  for (auto c : image)
    if (std::abs(c) > 1e-12) throw Error(ErrorCode::zero_fix_required, "inner map must fix the origin");
  return {std::move(node), 1 + *m};
}

// Nested Compose lists are spliced in, so every Compose node is flat.
inline MapExpr MapExpr::make(Compose node) {
  Compose flat;
  for (auto& f : node.maps) {
    if (const auto* c = f.as<Compose>())
      flat.maps.insert(flat.maps.end(), c->maps.begin(), c->maps.end());
    else
      flat.maps.push_back(std::move(f));
  }
  node = std::move(flat);
  std::optional<std::size_t> dim;
  for (const auto& f : node.maps) {
    if (!f.dim()) continue;
    if (dim && *dim != *f.dim()) throw Error(ErrorCode::dimension_mismatch, "composition dimensions do not chain");
    dim = f.dim();
  }
  return {std::move(node), dim};
}

// ---- constructors of the classified families ---------------------------------

inline MapExpr make_power_map(std::vector<std::uint64_t> exponents) { return MapExpr::make(PowerMap{std::move(exponents)}); }
inline MapExpr make_permute(Permutation sigma) { return MapExpr::make(Permute{std::move(sigma)}); }
inline MapExpr make_ball_map(BallAutomorphism h) { return MapExpr::make(BallAut{std::move(h)}); }

inline MapExpr make_ellipsoid_aut(ExponentVector p, Permutation sigma, BallAutomorphism h, std::vector<cplx> zetas) {
  EllipsoidAut node;
  node.p = std::move(p);
  node.sigma = std::move(sigma);
  node.h = std::move(h);
  node.zetas = std::move(zetas);
  return MapExpr::make(std::move(node));
}

inline MapExpr identity_ellipsoid_aut(const ExponentVector& p) {
  std::size_t k = 0;
  for (const auto& x : p) k += (x == ExactScalar(1));
  return make_ellipsoid_aut(p, Permutation::identity(p.size()), BallAutomorphism::identity(k),
                            std::vector<cplx>(p.size() - k, cplx(1.0)));
}

/// Flattening composition F o G.
inline MapExpr compose(const MapExpr& f, const MapExpr& g) {
  return MapExpr::make(Compose{{f, g}});
}

namespace detail {
inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline std::vector<std::uint64_t> natural_quotients(const ExponentVector& num, const ExponentVector& den,
                                                    const char* what) {
  std::vector<std::uint64_t> out;
  for (std::size_t j = 0; j < num.size(); ++j) {
    auto n = (num[j] / den[j]).as_natural();
    if (!n) throw Error(ErrorCode::precondition_violated, std::string(what) + " is not in N^n");
    out.push_back(*n);
  }
  return out;
}

inline ExponentVector divide(const ExponentVector& a, const std::vector<std::uint64_t>& r) {
  ExponentVector out;
  for (std::size_t j = 0; j < a.size(); ++j) out.push_back(a[j] / ExactScalar(static_cast<std::int64_t>(r[j])));
  return out;
}
}  // namespace detail

/// All r in N^n with p_sigma(j) / (q_j r_j) natural, in lexicographic order.
inline std::vector<std::vector<std::uint64_t>> enumerate_r(const ExponentVector& p, const ExponentVector& q,
                                                           const Permutation& sigma) {
  detail::require_same_length(p, q);
  if (sigma.size() != p.size()) throw Error(ErrorCode::dimension_mismatch, "sigma has the wrong size");
  auto ratios = detail::natural_quotients(sigma.apply(p), q, "p_sigma/q");
  std::vector<std::vector<std::uint64_t>> choices;
  for (auto n : ratios) choices.push_back(detail::divisors(n));
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<std::uint64_t> current(p.size());
  auto recurse = [&](auto&& self, std::size_t j) -> void {
    if (j == p.size()) {
      out.push_back(current);
      return;
    }
    for (auto d : choices[j]) {
      current[j] = d;
      self(self, j + 1);
    }
  };
  recurse(recurse, 0);
  return out;
}

/// Psi_{p_sigma/(q r)} o phi o Psi_r o sigma, phi an automorphism of E_{p_sigma/r}.
inline MapExpr synth_ellipsoid_proper(const ExponentVector& p, const ExponentVector& q, const Permutation& sigma,
                                      const std::vector<std::uint64_t>& r, const MapExpr& phi) {
  detail::require_same_length(p, q);
  if (p.size() < 2) throw Error(ErrorCode::dimension_mismatch, "ellipsoid maps need n >= 2");
  if (sigma.size() != p.size() || r.size() != p.size())
    throw Error(ErrorCode::dimension_mismatch, "sigma and r must have length n");
  const ExponentVector p_sigma = sigma.apply(p);
  (void)detail::natural_quotients(p_sigma, q, "p_sigma/q");
  for (auto x : r)
    if (x == 0) throw Error(ErrorCode::precondition_violated, "r must be in N^n");
  const ExponentVector middle = detail::divide(p_sigma, r);
  auto outer = detail::natural_quotients(middle, q, "p_sigma/(q r)");

  if (const auto* e = phi.as<EllipsoidAut>()) {
    if (!(e->p == middle))
      throw Error(ErrorCode::precondition_violated, "phi must be an automorphism of E_{p_sigma/r}");
  } else if (const auto* b = phi.as<BallAut>()) {
    bool all_one = std::all_of(middle.begin(), middle.end(), [](const ExactScalar& x) { return x == ExactScalar(1); });
    if (!all_one || b->h.dim() != middle.size())
      throw Error(ErrorCode::precondition_violated, "a ball automorphism is only valid when p_sigma/r = (1,...,1)");
  } else {
    throw Error(ErrorCode::wrong_node_type, "phi must be an ellipsoid or ball automorphism");
  }
  return MapExpr::make(Compose{{make_power_map(outer), phi, make_power_map(r), make_permute(sigma)}});
}

/// The map of the proper-map classification for one w coordinate. b = l qt/pt - k' q/p
/// must be an integer. For irrational q/p no Blaschke factor is allowed and k' >= 1;
/// for rational q/p, p/q = p'/q' in lowest terms. The constant of B is folded into zeta.
inline MapExpr synth_hartogs_1_1_proper(const ExactScalar& p, const ExactScalar& q, const ExactScalar& pt,
                                        const ExactScalar& qt, std::uint64_t kprime, std::uint64_t l, cplx zeta,
                                        cplx xi, const BlaschkeProduct& blaschke) {
  for (const auto* x : {&p, &q, &pt, &qt})
    if (x->sign() <= 0) throw Error(ErrorCode::non_positive_parameter, "parameter " + x->to_string() + " is not positive");
  if (l == 0) throw Error(ErrorCode::precondition_violated, "l must be a natural number");
  const ExactScalar b = ExactScalar(static_cast<std::int64_t>(l)) * (qt / pt) -
                        ExactScalar(static_cast<std::int64_t>(kprime)) * (q / p);
  if (!b.is_integer())
    throw Error(ErrorCode::congruence_violated, "l*qt/pt - k'*q/p = " + b.to_string() + " is not an integer");
  auto b64 = detail::to_i64(b.u().num());
  if (!b64) throw Error(ErrorCode::precondition_violated, "w exponent exceeds the 64-bit range");

  H2Proper node;
  node.zeta = zeta * blaschke.unimodular;
  node.xi = xi;
  node.kprime = kprime;
  node.l = l;
  node.b = *b64;
  node.blaschke = BlaschkeProduct{cplx(1.0), blaschke.zeros};
  detail::require_unimodular(blaschke.unimodular, "Blaschke constant");
  const ExactScalar ratio = p / q;
  if (!ratio.is_rational()) {
    if (!blaschke.is_constant())
      throw Error(ErrorCode::branch_violated, "q/p is irrational, so no Blaschke factor is allowed");
    if (kprime == 0) throw Error(ErrorCode::branch_violated, "q/p is irrational, so k must be at least 1");
    node.pprime = node.qprime = 0;
  } else {
    if (!blaschke.nonvanishing_at_zero()) throw Error(ErrorCode::degenerate_blaschke, "B must not vanish at 0");
    if (blaschke.is_constant() && kprime == 0)
      throw Error(ErrorCode::degenerate_blaschke, "constant B requires k' > 0");
    node.pprime = detail::require_u64(ratio.u().num(), "p'");
    node.qprime = detail::require_u64(ratio.u().den(), "q'");
  }
  return MapExpr::make(std::move(node));
}

struct DiskAutomorphism {
  double theta = 0.0;
  cplx alpha{0.0};
};

/// (z, w) -> (w^{q/p} phi(z w^{-q/p}), xi w); phi(0) = 0 unless q/p is natural.
inline MapExpr make_hartogs_1_1_aut(const ExactScalar& p, const ExactScalar& q, cplx xi, DiskAutomorphism phi) {
  if (p.sign() <= 0 || q.sign() <= 0) throw Error(ErrorCode::non_positive_parameter, "p and q must be positive");
  H2Aut node;
  node.xi = xi;
  node.s = (q / p).as_natural();
  node.theta = phi.theta;
  node.alpha = phi.alpha;
  return MapExpr::make(std::move(node));
}

/// (z, w) -> (zeta z^k, h(w)) with h = Psi_{q_sigma/(qt r)} o psi o Psi_r o sigma and
/// psi the automorphism of E_{q_sigma/r} that acts by U on the coordinates with
/// exponent 1 and by the rotations xis on the others (so psi(0) = 0).
inline MapExpr synth_hartogs_1_m_proper(const ExactScalar& p, const ExponentVector& q, const ExactScalar& pt,
                                        const ExponentVector& qt, std::uint64_t k, const Permutation& sigma,
                                        const std::vector<std::uint64_t>& r, const CMatrix& u,
                                        const std::vector<cplx>& xis, cplx zeta) {
  detail::require_same_length(q, qt);
  if (q.size() < 2) throw Error(ErrorCode::dimension_mismatch, "the w-block needs m >= 2");
  if (p.sign() <= 0 || pt.sign() <= 0) throw Error(ErrorCode::non_positive_parameter, "z exponents must be positive");
  if (!(ExactScalar(static_cast<std::int64_t>(k)) * pt == p))
    throw Error(ErrorCode::precondition_violated, "k must equal p/pt");
  if (sigma.size() != q.size() || r.size() != q.size())
    throw Error(ErrorCode::dimension_mismatch, "sigma and r must have length m");
  const ExponentVector q_sigma = sigma.apply(q);
  (void)detail::natural_quotients(q_sigma, qt, "q_sigma/qt");
  for (auto x : r)
    if (x == 0) throw Error(ErrorCode::precondition_violated, "r must be in N^m");
  const ExponentVector middle = detail::divide(q_sigma, r);
  auto outer = detail::natural_quotients(middle, qt, "q_sigma/(qt r)");
  std::size_t ones = 0;
  for (const auto& x : middle) ones += (x == ExactScalar(1));
  if (static_cast<std::size_t>(u.rows()) != ones)
    throw Error(ErrorCode::dimension_mismatch, "U must act on the " + std::to_string(ones) + " unit-exponent coordinates");
  auto psi = make_ellipsoid_aut(middle, Permutation::identity(middle.size()),
                                make_ball_aut(CVector::Zero(static_cast<Eigen::Index>(ones)), u), xis);
  auto inner = MapExpr::make(Compose{{make_power_map(outer), psi, make_power_map(r), make_permute(sigma)}});
  return MapExpr::make(HFpsProper{zeta, k, inner});
}

/// Automorphism (z, w) -> (zeta z, h(w)) of F_{p,q} with m >= 1, h in Aut(E_q), h(0) = 0.
inline MapExpr make_hartogs_1_m_aut(const ExponentVector& q, cplx zeta, const Permutation& sigma, const CMatrix& u,
                                    const std::vector<cplx>& zetas) {
  std::size_t ones = 0;
  for (const auto& x : q) ones += (x == ExactScalar(1));
  if (static_cast<std::size_t>(u.rows()) != ones)
    throw Error(ErrorCode::dimension_mismatch, "U must act on the unit-exponent coordinates");
  auto h = make_ellipsoid_aut(q, sigma, make_ball_aut(CVector::Zero(static_cast<Eigen::Index>(ones)), u), zetas);
  return MapExpr::make(HFpsProper{zeta, 1, h});
}

// ---- inversion ----------------------------------------------------------------

namespace detail {
inline DiskAutomorphism invert_disk(double theta, cplx alpha) { return {-theta, -alpha * std::polar(1.0, theta)}; }
}  // namespace detail

/// Closed-form inverse of an automorphism node.
inline MapExpr invert_aut(const MapExpr& f) {
  struct Visitor {
    MapExpr operator()(const PowerMap& n) const {
      for (auto e : n.exponents)
        if (e != 1) throw Error(ErrorCode::not_invertible, "power map with an exponent > 1 is not injective");
      return MapExpr::make(n);
    }
    MapExpr operator()(const Permute& n) const { return make_permute(n.sigma.inverse()); }
    MapExpr operator()(const BallAut& n) const { return make_ball_map(n.h.inverse()); }
    MapExpr operator()(const EllipsoidAut& n) const {
      // F = G o sigma; F^{-1} = sigma^{-1} o G^{-1} rewritten as G'' o sigma^{-1}.
      const Permutation pi = n.sigma.inverse();
      const BallAutomorphism hinv = n.h.inverse();
      const std::size_t k = n.ball_block.size();
      std::vector<std::size_t> position(n.p.size(), 0);
      for (std::size_t i = 0; i < k; ++i) position[n.ball_block[i]] = i;
      for (std::size_t i = 0; i < n.rest_block.size(); ++i) position[n.rest_block[i]] = i;
      CMatrix perm = CMatrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
      for (std::size_t i = 0; i < k; ++i)
        perm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(position[pi(n.ball_block[i])])) = 1.0;
      CVector center = perm * hinv.a();
      CMatrix unitary = perm * hinv.u() * perm.transpose();
      std::vector<cplx> zetas(n.rest_block.size());
      for (std::size_t i = 0; i < n.rest_block.size(); ++i)
        zetas[i] = std::conj(n.zetas[position[pi(n.rest_block[i])]]);
      return make_ellipsoid_aut(n.p, pi, make_ball_aut(center, unitary), zetas);
    }
    MapExpr operator()(const H2Proper& n) const {
      if (n.kprime == 1 && n.l == 1 && n.b == 0 && n.blaschke.is_constant()) {
        H2Proper inv = n;
        inv.zeta = std::conj(n.zeta);
        inv.xi = std::conj(n.xi);
        return MapExpr::make(inv);
      }
      const bool mobius = n.kprime == 0 && n.l == 1 && n.pprime == 1 && n.blaschke.zeros.size() == 1 &&
                          n.b == static_cast<std::int64_t>(n.qprime);
      if (!mobius) throw Error(ErrorCode::not_invertible, "proper Hartogs map is not injective");
      // zeta w^s B(z w^-s) with one zero is w^s phi(z w^-s); invert as an H2Aut and convert back.
      const double theta = std::arg(n.zeta);
      const cplx alpha = n.blaschke.zeros.front();
      auto d = detail::invert_disk(theta, alpha);
      const cplx shift = detail::ipow(std::conj(n.xi), static_cast<std::int64_t>(n.qprime));
      H2Proper inv = n;
      inv.zeta = std::polar(1.0, d.theta);
      inv.xi = std::conj(n.xi);
      inv.blaschke = BlaschkeProduct{cplx(1.0), {d.alpha * shift}};
      return MapExpr::make(inv);
    }
    MapExpr operator()(const H2Aut& n) const {
      H2Aut inv;
      inv.xi = std::conj(n.xi);
      inv.s = n.s;
      if (!n.s) {
        inv.theta = -n.theta;
        return MapExpr::make(inv);
      }
      auto d = detail::invert_disk(n.theta, n.alpha);
      inv.theta = d.theta;
      inv.alpha = d.alpha * detail::ipow(std::conj(n.xi), static_cast<std::int64_t>(*n.s));
      return MapExpr::make(inv);
    }
    MapExpr operator()(const HFpsProper& n) const {
      if (n.k != 1) throw Error(ErrorCode::not_invertible, "z -> z^k with k > 1 is not injective");
      return MapExpr::make(HFpsProper{std::conj(n.zeta), 1, invert_aut(*n.inner)});
    }
    MapExpr operator()(const Compose& n) const {
      Compose inv;
      for (auto it = n.maps.rbegin(); it != n.maps.rend(); ++it) inv.maps.push_back(invert_aut(*it));
      return MapExpr::make(std::move(inv));
    }
  };
  return std::visit(Visitor{}, f.node());
}

// ---- structure ----------------------------------------------------------------

/// Whether an H2Proper map between F_{p,q} and F_{pt,qt} has the shape
///   (zeta z^k w^{l qt/pt - k q/p}, xi w^l)       for q/p not natural,
///   (zeta w^{l qt/pt} B(z w^{-q/p}), xi w^l)     for q/p natural, B any finite Blaschke product.
/// In the natural case a monomial z^{k'} is absorbed into B as the factor t^{k'}.
inline bool is_landucci_form(const MapExpr& f, const ExactScalar& p, const ExactScalar& q, const ExactScalar& pt,
                             const ExactScalar& qt) {
  const auto* n = f.as<H2Proper>();
  if (!n) throw Error(ErrorCode::wrong_node_type, "is_landucci_form needs an h2prop node");
  const ExactScalar b = ExactScalar(static_cast<std::int64_t>(n->l)) * (qt / pt) -
                        ExactScalar(static_cast<std::int64_t>(n->kprime)) * (q / p);
  if (!(b == ExactScalar(n->b)))
    throw Error(ErrorCode::congruence_violated, "map exponents do not match the given domains");
  const ExactScalar ratio = q / p;
  if (ratio.is_natural()) return true;
  return n->blaschke.is_constant();
}

// ---- text form ----------------------------------------------------------------

namespace detail {
inline std::string format_uints(const std::vector<std::uint64_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  return out;
}

inline std::string format_ball(const BallAutomorphism& h) {
  std::string out = "ballaut(a=[";
  for (Eigen::Index i = 0; i < h.a().size(); ++i) {
    if (i) out += ",";
    out += format_complex(h.a()[i]);
  }
  out += "],U=[";
  for (Eigen::Index i = 0; i < h.u().rows(); ++i) {
    if (i) out += ",";
    out += "[";
    for (Eigen::Index j = 0; j < h.u().cols(); ++j) {
      if (j) out += ",";
      out += format_complex(h.u()(i, j));
    }
    out += "]";
  }
  return out + "])";
}
}  // namespace detail

std::string format_map(const MapExpr& f);

namespace detail {
struct Formatter {
  std::string operator()(const PowerMap& n) const { return "pow(" + format_uints(n.exponents) + ")"; }
  std::string operator()(const Permute& n) const {
    auto img = n.sigma.one_based();
    return "perm(" + format_uints(std::vector<std::uint64_t>(img.begin(), img.end())) + ")";
  }
  std::string operator()(const BallAut& n) const { return format_ball(n.h); }
  std::string operator()(const EllipsoidAut& n) const {
    auto img = n.sigma.one_based();
    return "eaut(p=" + format_list(n.p, [](const ExactScalar& x) { return x.to_string(); }) + ",sigma=[" +
           format_uints(std::vector<std::uint64_t>(img.begin(), img.end())) + "],H=" + format_ball(n.h) +
           ",zeta=" + format_list(n.zetas, format_complex) + ")";
  }
  std::string operator()(const H2Proper& n) const {
    return "h2prop(zeta=" + format_complex(n.zeta) + ",xi=" + format_complex(n.xi) +
           ",kp=" + std::to_string(n.kprime) + ",l=" + std::to_string(n.l) + ",b=" + std::to_string(n.b) +
           ",pp=" + std::to_string(n.pprime) + ",qp=" + std::to_string(n.qprime) +
           ",B=" + format_list(n.blaschke.zeros, format_complex) + ")";
  }
  std::string operator()(const H2Aut& n) const {
    return "h2aut(xi=" + format_complex(n.xi) + ",s=" + (n.s ? std::to_string(*n.s) : std::string("none")) +
           ",theta=" + format_double(n.theta) + ",alpha=" + format_complex(n.alpha) + ")";
  }
  std::string operator()(const HFpsProper& n) const {
    return "hfps(zeta=" + format_complex(n.zeta) + ",k=" + std::to_string(n.k) + ",h=" + format_map(*n.inner) + ")";
  }
  std::string operator()(const Compose& n) const {
    std::string out = "compose(";
    for (std::size_t i = 0; i < n.maps.size(); ++i) {
      if (i) out += ",";
      out += format_map(n.maps[i]);
    }
    return out + ")";
  }
};
}  // namespace detail

/// Canonical text form, accepted back by parse_map.
inline std::string format_map(const MapExpr& f) { return std::visit(detail::Formatter{}, f.node()); }

}  // namespace holomap
