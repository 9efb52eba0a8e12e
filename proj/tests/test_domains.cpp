#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "holomap/domains.hpp"
#include "support/reference.hpp"

using namespace holomap;

namespace {
Ellipsoid ellipsoid(std::initializer_list<std::int64_t> p) {
  std::vector<ExactScalar> xs;
  for (auto x : p) xs.emplace_back(x);
  return Ellipsoid(xs);
}
HartogsTriangle hartogs(std::int64_t p, std::initializer_list<ExactScalar> q) { return HartogsTriangle(ExactScalar(p), q); }
}  // namespace

TEST_CASE("ellipsoid gap examples", "[domains]") {
  auto ball = ellipsoid({1, 1});
  CHECK(gap_ellipsoid(ball, {0.0, 0.0}) == 1.0);
  CHECK(gap_ellipsoid(ball, {1.0, 0.0}) == Catch::Approx(0.0).margin(1e-15));
  CHECK(gap_ellipsoid(ellipsoid({2, 2}), {0.5, 0.5}) == Catch::Approx(0.875).epsilon(1e-15));
  CHECK_THROWS_AS(gap_ellipsoid(ball, {0.1}), Error);
}

TEST_CASE("hartogs gap examples", "[domains]") {
  auto f11 = hartogs(1, {ExactScalar(1)});
  auto g = gaps_hartogs(f11, {0.0, 0.5});
  CHECK(g.k == Catch::Approx(0.25));
  CHECK(g.l == Catch::Approx(0.75));
  auto f23 = hartogs(2, {ExactScalar(3)});
  g = gaps_hartogs(f23, {0.5, 0.9});
  CHECK(g.k == Catch::Approx(0.46894100000000005).epsilon(1e-14));
  CHECK(g.l == Catch::Approx(0.46855899999999995).epsilon(1e-14));
  g = gaps_hartogs(f11, {0.0, 0.0});
  CHECK(g.k == 0.0);
  CHECK(g.l == 1.0);
  CHECK_FALSE(is_interior(f11, {0.0, 0.0}));
  CHECK_THROWS_AS(gaps_hartogs(f11, {0.1, 0.2, 0.3}), Error);
}

TEST_CASE("domain construction validates", "[domains]") {
  CHECK_THROWS_AS(ellipsoid({1, 0}), Error);
  CHECK_THROWS_AS(Ellipsoid({}), Error);
  CHECK_THROWS_AS(HartogsTriangle(ExactScalar(-1), {ExactScalar(1)}), Error);
  CHECK_THROWS_AS(HartogsTriangle(ExactScalar(1), {}), Error);
  CHECK(ellipsoid({1, 2, 1}).ball_block_size() == 2);
  CHECK(to_string(Domain(hartogs(1, {ExactScalar(Rational(BigInt(1), BigInt(2))), ExactScalar::sqrt2()}))) ==
        "F(1;1/2,0+1*s2)");
}

TEST_CASE("interior samples", "[domains]") {
  auto e = ellipsoid({1, 1});
  auto pts = sample_interior(e, 100, 7);
  REQUIRE(pts.size() == 100);
  for (const auto& z : pts) CHECK(gap_ellipsoid(e, z) > interior_floor);

  auto f = hartogs(2, {ExactScalar(3)});
  auto hp = sample_interior(f, 100, 7);
  REQUIRE(hp.size() == 100);
  for (const auto& x : hp) {
    auto g = gaps_hartogs(f, x);
    CHECK(g.k > 0.0);
    CHECK(g.l > interior_floor);
    CHECK(x[1] != cplx(0.0));
  }
  CHECK(sample_interior(f, 100, 7) == hp);
  CHECK(sample_interior(f, 100, 8) != hp);
  CHECK_THROWS_AS(sample_interior(f, 0, 7), Error);
}

TEST_CASE("near-stratum samples", "[domains]") {
  auto e = ellipsoid({2, 1});
  for (const auto& z : sample_near_stratum(e, StratumTag::ellipsoid_boundary, 1e-3, 10, 1)) {
    double g = gap_ellipsoid(e, z);
    CHECK(g >= 5e-4);
    CHECK(g <= 1e-3);
  }
  auto f = hartogs(1, {ExactScalar(1)});
  for (const auto& x : sample_near_stratum(f, StratumTag::hartogs_L, 1e-2, 10, 1)) {
    auto g = gaps_hartogs(f, x);
    CHECK(g.l >= 5e-3);
    CHECK(g.l <= 1e-2);
    CHECK(g.k >= 0.1);
  }
  for (const auto& x : sample_near_stratum(f, StratumTag::hartogs_K, 1e-2, 10, 1)) {
    auto g = gaps_hartogs(f, x);
    CHECK(g.k >= 5e-3);
    CHECK(g.k <= 1e-2);
    CHECK(g.l >= 0.1);
    CHECK(g.w_level > 0.0);
  }
  CHECK_THROWS_AS(sample_near_stratum(e, StratumTag::hartogs_K, 1e-2, 10, 1), Error);
  CHECK_THROWS_AS(sample_near_stratum(f, StratumTag::ellipsoid_boundary, 1e-2, 10, 1), Error);
  CHECK_THROWS_AS(sample_near_stratum(f, StratumTag::hartogs_K, 0.3, 10, 1), Error);
}

TEST_CASE("near-stratum bands scale with eps", "[domains][property]") {
  auto f = HartogsTriangle(ExactScalar(Rational(BigInt(3), BigInt(2))), {ExactScalar::sqrt2(), ExactScalar(2)});
  for (double eps = 0.125; eps > 1e-6; eps /= 4) {
    for (auto tag : {StratumTag::hartogs_K, StratumTag::hartogs_L}) {
      for (const auto& x : sample_near_stratum(f, tag, eps, 50, 3)) {
        auto g = gaps_hartogs(f, x);
        double target = tag == StratumTag::hartogs_K ? g.k : g.l;
        double other = tag == StratumTag::hartogs_K ? g.l : g.k;
        CHECK(target >= eps / 2);
        CHECK(target <= eps);
        CHECK(other >= 0.1);
        CHECK(x[1] != cplx(0.0));
      }
    }
  }
}

TEST_CASE("float gaps agree with a pow-based reference", "[domains][property]") {
  // exponent 3/2 for z, sqrt2 for w
  auto f = HartogsTriangle(ExactScalar(Rational(BigInt(3), BigInt(2))), {ExactScalar::sqrt2()});
  for (const auto& x : sample_interior(f, 1000, 11)) {
    auto g = gaps_hartogs(f, x);
    auto [k, l] = reference::hartogs_gaps_1_1(1.5, std::sqrt(2.0), x[0], x[1]);
    CHECK(g.k == Catch::Approx(k).margin(1e-13));
    CHECK(g.l == Catch::Approx(l).margin(1e-13));
    // same interior verdict, with margin
    CHECK((k > 1e-12 && l > 1e-12) == (g.k > 1e-12 && g.l > 1e-12));
  }
}

TEST_CASE("interior margin is relative near the origin", "[domains]") {
  auto f = hartogs(2, {ExactScalar(5)});
  // |w| = 0.01: sum |w|^10 = 1e-20, far below the absolute floor
  ComplexPoint x{cplx(1e-6), cplx(0.01)};
  CHECK(min_gap(f, x) < interior_floor);
  CHECK(interior_margin(f, x) > 0.99);
  CHECK(is_interior(f, x));
}
