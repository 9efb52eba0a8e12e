#pragma once

// Independent reference formulas, written from the textbook forms rather than
// from the library's factorizations, used to cross-check evaluation.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace holomap::reference {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z, a>), the involution of the ball
/// swapping 0 and a. P_a is the orthogonal projection onto span(a).
inline Vec involution(const Vec& a, const Vec& z) {
  const double na = a.squaredNorm();
  const cplx za = a.dot(z);  // <z, a> = sum z_j conj(a_j)
  Vec pz = na > 0 ? Vec(a * (za / na)) : Vec(Vec::Zero(z.size()));
  Vec qz = z - pz;
  const double s = std::sqrt(1.0 - na);
  return (a - pz - s * qz) / (1.0 - za);
}

/// Ball automorphism with H(a) = 0 and derivative direction U: H = -U phi_a.
inline Vec ball_automorphism(const Vec& a, const Mat& u, const Vec& z) { return -(u * involution(a, z)); }

/// One-zero Blaschke factor (t - a) / (1 - conj(a) t).
inline cplx blaschke1(cplx a, cplx t) { return (t - a) / (1.0 - std::conj(a) * t); }

/// (z, w) -> (z^3 w^3 B(z^2 w^-3), w^3) with B the factor vanishing at 1/2.
inline std::vector<cplx> counterexample(cplx z, cplx w) {
  const cplx t = z * z / (w * w * w);
  return {z * z * z * w * w * w * blaschke1(0.5, t), w * w * w};
}

/// Gaps of F_{p,q} with one w coordinate, via std::pow.
inline std::pair<double, double> hartogs_gaps_1_1(double p, double q, cplx z, cplx w) {
  const double rho = std::pow(std::abs(w), 2 * q);
  return {rho - std::pow(std::abs(z), 2 * p), 1.0 - rho};
}

}  // namespace holomap::reference
