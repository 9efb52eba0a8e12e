#pragma once

// Seeded random elements of the automorphism families.

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/QR>

#include "holomap/domains.hpp"
#include "holomap/existence.hpp"
#include "holomap/maps.hpp"
#include "holomap/random.hpp"

namespace holomap {

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of
/// diag(R) moved into Q.
inline CMatrix random_unitary(std::size_t k, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(k);
  if (n == 0) return CMatrix(0, 0);
  CMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

/// Uniform direction, radius uniform in [0, max_radius).
inline CVector random_ball_point(std::size_t k, double max_radius, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(k);
  CVector v(n);
  if (n == 0) return v;
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.complex_normal();
  return v.normalized() * (max_radius * rng.uniform());
}

inline BallAutomorphism random_ball_aut(std::size_t k, Rng& rng, double max_radius = 0.7) {
  return make_ball_aut(random_ball_point(k, max_radius, rng), random_unitary(k, rng));
}

namespace detail {
inline Permutation random_stabilizer_element(const ExponentVector& p, Rng& rng) {
  // Shuffle within each block of equal entries (Fisher-Yates), which is uniform on the stabilizer.
  std::vector<std::size_t> images(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) images[i] = i;
  std::vector<bool> done(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> block;
    for (std::size_t j = i; j < p.size(); ++j)
      if (p[j] == p[i]) {
        block.push_back(j);
        done[j] = true;
      }
    std::vector<std::size_t> shuffled = block;
    for (std::size_t t = shuffled.size(); t > 1; --t) {
      auto u = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(t - 1)));
      std::swap(shuffled[t - 1], shuffled[u]);
    }
    for (std::size_t t = 0; t < block.size(); ++t) images[block[t]] = shuffled[t];
  }
  return Permutation(std::move(images));
}

inline std::vector<cplx> random_phases(std::size_t n, Rng& rng) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(rng.phase());
  return out;
}

inline std::size_t count_ones(const ExponentVector& p) {
  std::size_t k = 0;
  for (const auto& x : p) k += (x == ExactScalar(1));
  return k;
}
}  // namespace detail

/// Random element of Aut(E_p): sigma in the stabilizer, ball block center of
/// norm below max_radius, Haar unitary, random rotations.
inline MapExpr random_ellipsoid_aut(const ExponentVector& p, Rng& rng, double max_radius = 0.7) {
  const std::size_t k = detail::count_ones(p);
  auto sigma = detail::random_stabilizer_element(p, rng);
  auto h = random_ball_aut(k, rng, max_radius);
  return make_ellipsoid_aut(p, std::move(sigma), std::move(h), detail::random_phases(p.size() - k, rng));
}

/// Random element of Aut(F_{p,q}). For m = 1 the disk automorphism may move
/// the origin only when q/p is natural; for m >= 2 the w-block map fixes 0.
inline MapExpr random_hartogs_aut(const HartogsTriangle& f, Rng& rng, double max_radius = 0.7) {
  if (f.m() == 1) {
    DiskAutomorphism phi;
    phi.theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
    cplx xi = rng.phase();
    if ((f.q()[0] / f.p()).is_natural()) phi.alpha = std::polar(max_radius * rng.uniform(), rng.uniform(-std::numbers::pi, std::numbers::pi));
    return make_hartogs_1_1_aut(f.p(), f.q()[0], xi, phi);
  }
  const auto& q = f.q();
  const std::size_t k = detail::count_ones(q);
  cplx zeta = rng.phase();
  auto sigma = detail::random_stabilizer_element(q, rng);
  CMatrix u = random_unitary(k, rng);
  return make_hartogs_1_m_aut(q, zeta, sigma, u, detail::random_phases(q.size() - k, rng));
}

inline MapExpr random_automorphism(const Domain& d, Rng& rng) {
  if (const auto* e = std::get_if<Ellipsoid>(&d)) return random_ellipsoid_aut(e->exponents(), rng);
  return random_hartogs_aut(std::get<HartogsTriangle>(d), rng);
}

inline MapExpr identity_automorphism(const Domain& d) {
  if (const auto* e = std::get_if<Ellipsoid>(&d)) return identity_ellipsoid_aut(e->exponents());
  const auto& f = std::get<HartogsTriangle>(d);
  if (f.m() == 1) return make_hartogs_1_1_aut(f.p(), f.q()[0], cplx(1.0), DiskAutomorphism{});
  const std::size_t k = detail::count_ones(f.q());
  return make_hartogs_1_m_aut(f.q(), cplx(1.0), Permutation::identity(f.m()),
                              CMatrix::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)),
                              std::vector<cplx>(f.m() - k, cplx(1.0)));
}

}  // namespace holomap
