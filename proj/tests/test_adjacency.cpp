#include <doctest.h>

#include <cmath>
#include <numbers>

#include "josephson/adjacency.hpp"
#include "oracles.hpp"

using namespace josephson;
using std::numbers::pi;

TEST_CASE("seed_y0: half-integer closed form and defining property") {
  for (double a0 : {0.4, pi / 4, 2.0, 5.1}) {
    CHECK(std::abs(seed_y0(0.5, a0) - std::tan(a0)) < 1e-10 * std::max(1.0, std::abs(std::tan(a0))));
  }
  for (double b : {0.0, 1.0, 2.0, 0.3})
    for (double a0 : {1.1, 3.7, 8.2}) {
      const double y0 = seed_y0(b, a0);
      CHECK(std::abs(u_eval({b, y0}, a0).u) < 1e-10);
    }
  CHECK(std::abs(seed_y0(0.0, oracle::j0_zero(1))) < 1e-12);
}

TEST_CASE("seed_y0: vanishing Y uses the pure second-kind combination") {
  const double y1 = find_zeros({1.0, 0.0, true}, 1.0, 5.0, 1).zeros.at(0);
  CHECK_THROWS_WITH_AS(seed_y0(1.0, y1), doctest::Contains("Y vanishes at seed"), DomainError);
  const BesselCombo c = seed_combo(1.0, y1);
  CHECK(c.pure_second_kind);
  CHECK(std::abs(u_eval(c, y1).u) < 1e-10);
  CHECK_THROWS_AS(seed_y0(1.0, 0.0), DomainError);
}

TEST_CASE("chain: half-integer oracle") {
  // b = 1/2, a0 = pi/4: y0 = 1, u = sqrt(2/pi)(sin s - cos s), zeros pi/4 + k pi,
  // |u'| = 2/sqrt(pi) at each, so omega_k = omega0 a0 / a_k.
  const AdjacencySeed seed{0.5, pi / 4, 1.3, 0.0};
  ChainOptions o;
  o.verify = false;
  const auto c = chain(seed, 4, o);
  REQUIRE(c.size() == 4);
  for (int k = 0; k < 4; ++k) {
    const double ak = pi / 4 + k * pi;
    CHECK(c[k].k == k + 1);
    CHECK(std::abs(c[k].a_star - ak) < 1e-10);
    CHECK(std::abs(c[k].omega_star - 1.3 * (pi / 4) / ak) < 1e-10);
  }
  CHECK(c[0].omega_star == seed.omega0);
}

TEST_CASE("chain: monotone, fixed point, empty, errors") {
  const AdjacencySeed seed{1.0, 4.0459614394, 1.0, 0.0};
  ChainOptions o;
  o.verify = false;
  const auto c = chain(seed, 6, o);
  REQUIRE(c.size() == 6);
  bool hit = false;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k > 0) CHECK(c[k].a_star > c[k - 1].a_star);
    if (c[k].a_star == seed.a0) {
      CHECK(c[k].omega_star == seed.omega0);
      hit = true;
    }
  }
  CHECK(hit);
  CHECK(chain(seed, 0, o).empty());
  CHECK_THROWS_AS(chain(seed, -1, o), DomainError);
  CHECK_THROWS_AS(chain({1.0, -2.0, 1.0, 0.0}, 3, o), DomainError);
  CHECK_THROWS_AS(chain({1.0, 2.0, 0.0, 0.0}, 3, o), DomainError);
}

TEST_CASE("chain: output does not depend on which chain point seeds it") {
  ChainOptions o;
  o.verify = false;
  const auto c = chain({2.0, 3.1, 0.9, 0.0}, 5, o);
  REQUIRE(c.size() == 5);
  const auto d = chain({2.0, c[2].a_star, c[2].omega_star, 0.0}, 5, o);
  REQUIRE(d.size() == 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(std::abs(c[k].a_star - d[k].a_star) < 1e-12 * c[k].a_star);
    CHECK(std::abs(c[k].omega_star - d[k].omega_star) < 1e-12 * c[k].omega_star);
  }
}

TEST_CASE("omega_from_b2b3 and symmetric_gauge") {
  CHECK(omega_from_b2b3(1.0, -0.25) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(omega_from_b2b3(0.25, -0.25) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_WITH_AS(omega_from_b2b3(1.0, 1.0), "no real omega*", DomainError);
  CHECK(symmetric_gauge(5.0, 5.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(symmetric_gauge(1.0, 16.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_WITH_AS(symmetric_gauge(1.0, -4.0), "no real symmetric gauge", DomainError);
  CHECK_THROWS_AS(symmetric_gauge(0.0, 1.0), DomainError);
  const double b2 = 0.7, b3 = 2.9, d = symmetric_gauge(b2, b3);
  CHECK(std::abs(b2 * d * d - b3 / (d * d)) < 1e-14);
}

TEST_CASE("verify_point: determinant obstruction and Euler limit") {
  // det M = -1 for b = 1/2. With m = max |M - I|, |det M - 1| <= 2m + 2m^2,
  // so det M = -1 forces m >= (sqrt(5) - 1) / 2.
  for (double a : {0.5, 3.0, 9.0})
    for (double w : {0.5, 1.0, 4.0}) CHECK(verify_point(0.5, a, w) >= 0.5 * (std::sqrt(5.0) - 1.0) - 1e-9);

  for (double w : {0.7, 1.9, 2.5}) {
    REQUIRE(oracle::euler_nonresonant(1.0, w, 0.05));
    const double ref = (oracle::euler_monodromy(1.0, w) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    CHECK(ref > 0.1);
    CHECK(std::abs(verify_point(1.0, 1e-6, w) - ref) < 1e-4);
  }
  CHECK_THROWS_AS(verify_point(1.0, 0.0, 1.0), DomainError);
  CHECK_FALSE(is_certified_adjacency(0.5, 1.0, 1.0));
}

TEST_CASE("find_seed: certified output and range errors") {
  const AdjacencySeed s = find_seed(1.0, 1.0, 0.5, 6.0);
  CHECK(verify_point(1.0, s.a0, 1.0) < kTrivialityThreshold);
  CHECK(s.residual < kTrivialityThreshold);
  CHECK(is_certified_adjacency(1.0, s.a0, 1.0));
  CHECK(std::abs(u_eval(seed_combo(1.0, s.a0), s.a0).u) < 1e-10);
  CHECK_THROWS_AS(find_seed(1.0, 1.0, 3.0, 2.0), DomainError);
  CHECK_THROWS_AS(find_seed(1.0, 1.0, -1.0, 2.0), DomainError);
  CHECK_THROWS_AS(find_seed(0.5, 1.0, 0.5, 6.0), DomainError);
  CHECK_THROWS_WITH_AS(find_seed(1.0, 1.0, 0.5, 0.9), "no adjacency in range", NotFoundError);
}

TEST_CASE("chain abscissae are adjacency points, with omega found by minimization") {
  const AdjacencySeed s = find_seed(1.0, 1.0, 0.5, 6.0);
  ChainOptions o;
  o.verify = false;
  const auto c = chain(s, 4, o);
  REQUIRE(c.size() == 4);
  for (int k = 2; k < 4; ++k) {
    CAPTURE(c[k].a_star);
    const OmegaFit f = best_omega(1.0, c[k].a_star, 0.3, 1.5);
    CHECK(f.residual < kTrivialityPolish);
    // Round trip: searching on b = 1 at that omega recovers the abscissa.
    const AdjacencySeed back = find_seed(1.0, f.omega, c[k].a_star - 0.3, c[k].a_star + 0.3);
    CHECK(std::abs(back.a0 - c[k].a_star) < 1e-3);
  }
}

TEST_CASE("boundary_chain: seed invariants and empty chain") {
  const BoundaryChain bc = boundary_chain(0.4, 2.0, 1.0, 0);
  CHECK(bc.points.empty());
  CHECK(std::abs(bc.seed_det - std::exp(cplx(0.0, -2.0 * pi * 0.4))) < 1e-6);
  CHECK(std::abs(bc.seed_discriminant - (bc.seed_trace * bc.seed_trace - 4.0 * bc.seed_det)) < 1e-9);
  const BoundaryChain two = boundary_chain(0.4, 2.0, 1.0, 2);
  REQUIRE(two.points.size() == 2);
  for (const auto& p : two.points) CHECK(std::abs(p.det - std::exp(cplx(0.0, -2.0 * pi * 0.4))) < 1e-6);
}
