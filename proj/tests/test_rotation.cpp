#include <doctest.h>

#include <cmath>
#include <numbers>

#include "josephson/rotation.hpp"
#include "josephson/specfun.hpp"
#include "oracles.hpp"

using namespace josephson;
using std::numbers::pi;

TEST_CASE("phase_rhs: literal form") {
  CHECK(phase_rhs({0.0, 0.0, 1.0})(0.7, 0.0) == 0.0);
  CHECK(phase_rhs({2.0, 0.0, 1.0})(1.3, pi / 2) == doctest::Approx(1.0));
  CHECK(phase_rhs({0.0, 1.0, 2.0})(0.0, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(JosephsonParams({0.0, 0.0, 1e-4}).validate(), DomainError);
  CHECK_THROWS_AS(JosephsonParams({NAN, 0.0, 1.0}).validate(), DomainError);
}

TEST_CASE("poincare_lift: fixed point, contraction, equivariance, monotonicity") {
  CHECK(std::abs(poincare_lift({0.0, 0.0, 1.0}, 0.0)) < 1e-14);
  const double p = poincare_lift({0.0, 0.0, 1.0}, 0.1);
  CHECK(p > 0.0);
  CHECK(p < 0.1);
  for (JosephsonParams q : {JosephsonParams{0.4, 1.2, 1.0}, JosephsonParams{1.7, 3.0, 0.6}}) {
    double prev = -INFINITY;
    for (double phi : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
      const double v = poincare_lift(q, phi);
      CHECK(std::abs(poincare_lift(q, phi + 2 * pi) - v - 2 * pi) < 1e-8);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("poincare_lift_batch matches scalar lifts") {
  const JosephsonParams q{0.8, 2.0, 1.3};
  const std::vector<double> phis{0.0, 1.0, 4.0};
  const auto batch = poincare_lift_batch(q, phis);
  for (std::size_t i = 0; i < phis.size(); ++i) CHECK(std::abs(batch[i] - poincare_lift(q, phis[i])) < 1e-8);
}

TEST_CASE("rotation_number: examples") {
  CHECK(std::abs(rotation_number({0.0, 0.0, 1.0}).rho) < 1e-9);
  const RotationEstimate e = rotation_number({2.0, 0.0, 1.0});
  CHECK(std::abs(e.rho - oracle::rho_axis_quadrature(2.0, 1.0)) < 1e-6);
  CHECK(e.converged);
  CHECK(e.error_estimate >= 0.0);
  CHECK(e.periods_used >= 1);
  CHECK(std::abs(rotation_number({0.0, 2.5, 1.0}).rho) < 1e-6);
  CHECK_THROWS_AS(rotation_number({1.0, 0.0, 1.0}, 4), DomainError);
}

TEST_CASE("rho_axis_analytic") {
  CHECK(rho_axis_analytic(0.5, 1.0) == 0.0);
  CHECK(rho_axis_analytic(2.0, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(rho_axis_analytic(-2.0, 1.0) == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));
  for (double b : {1.3, 2.7, -4.1})
    for (double w : {0.5, 1.0, 3.0}) CHECK(std::abs(rho_axis_analytic(b, w) - oracle::rho_axis_quadrature(b, w)) < 1e-10);
}

TEST_CASE("rotation_number: axis agreement and symmetries") {
  for (double b : {0.3, 1.4, 2.6}) {
    CHECK(std::abs(rotation_number({b, 0.0, 1.0}).rho - rho_axis_analytic(b, 1.0)) < 1e-6);
    for (double a : {0.8, 2.2}) {
      const RotationEstimate r = rotation_number({b, a, 1.0});
      const RotationEstimate ra = rotation_number({b, -a, 1.0});
      const RotationEstimate rb = rotation_number({-b, a, 1.0});
      const RotationEstimate rp = rotation_number({b, a, 1.0}, 1024, {}, 2.0);
      const double tol = 2.0 * std::max(r.error_estimate, 1e-9);
      CHECK(std::abs(r.rho - ra.rho) <= tol + 2.0 * ra.error_estimate);
      CHECK(std::abs(r.rho + rb.rho) <= tol + 2.0 * rb.error_estimate);
      CHECK(std::abs(r.rho - rp.rho) <= tol + 2.0 * rp.error_estimate);
    }
  }
}

TEST_CASE("scan_grid: trivial grid, axis cell, monotone rows, serial reference") {
  const TongueGrid z = scan_grid({0.0, 0.0, 2}, {0.0, 0.0, 2}, 1.0);
  for (const auto& c : z.rho_values) CHECK(c.rho == 0.0);

  const TongueGrid g = scan_grid({0.0, 2.0, 5}, {0.0, 1.0, 3}, 1.0, 256);
  REQUIRE(g.rho_values.size() == 15);
  CHECK(std::abs(g.at(4, 0).rho - std::sqrt(3.0)) < 1e-5);
  for (std::size_t ia = 0; ia < g.a_axis.size(); ++ia)
    for (std::size_t ib = 1; ib < g.b_axis.size(); ++ib)
      CHECK(g.at(ib, ia).rho >= g.at(ib - 1, ia).rho - 1e-6);

  const TongueGrid s = scan_grid_serial({0.0, 2.0, 5}, {0.0, 1.0, 3}, 1.0, 256);
  for (std::size_t i = 0; i < g.rho_values.size(); ++i) CHECK(g.rho_values[i].rho == s.rho_values[i].rho);
}

TEST_CASE("is_phase_locked") {
  CHECK(is_phase_locked({0.2, 0.0, 1.0}));
  CHECK_FALSE(is_phase_locked({2.0, 0.0, 1.0}));
  CHECK(is_phase_locked({1.0, 1.0, 2.0}));  // deep inside the rho = 1 tongue
}

TEST_CASE("trace_boundary: axis edges") {
  const std::vector<double> a0{0.0};
  const BoundaryCurve m = trace_boundary(0, Side::Minus, a0, 1.0);
  const BoundaryCurve p = trace_boundary(0, Side::Plus, a0, 1.0);
  REQUIRE(m.samples.size() == 1);
  REQUIRE(p.samples.size() == 1);
  CHECK(std::abs(m.samples[0].second + 1.0) < 1e-6);
  CHECK(std::abs(p.samples[0].second - 1.0) < 1e-6);
}

TEST_CASE("trace_boundary: a-samples increasing, edges bracket the plateau") {
  const std::vector<double> as{0.5, 1.0, 1.5, 2.0};
  const BoundaryCurve lo = trace_boundary(1, Side::Minus, as, 2.0);
  const BoundaryCurve hi = trace_boundary(1, Side::Plus, as, 2.0);
  REQUIRE(lo.samples.size() == as.size());
  REQUIRE(hi.samples.size() == as.size());
  for (std::size_t i = 0; i < as.size(); ++i) {
    CHECK(lo.samples[i].first == as[i]);
    CHECK(lo.samples[i].second <= hi.samples[i].second + 1e-6);
    const double mid = 0.5 * (lo.samples[i].second + hi.samples[i].second);
    CHECK(std::abs(rotation_number({mid, as[i], 2.0}).rho - 1.0) < 1e-4);
  }
  CHECK_THROWS_AS(trace_boundary(-1, Side::Minus, as, 2.0), DomainError);
  const std::vector<double> bad{1.0, 0.5};
  CHECK_THROWS_AS(trace_boundary(1, Side::Minus, bad, 2.0), DomainError);
}

TEST_CASE("trace_boundary: Bessel asymptotics at large a") {
  const std::vector<double> a{40.0};
  const double target = 1.0 + bessel_pair(1.0, 40.0).J / 2.0;
  const BoundaryCurve m = trace_boundary(1, Side::Minus, a, 2.0);
  const BoundaryCurve p = trace_boundary(1, Side::Plus, a, 2.0);
  REQUIRE(m.samples.size() == 1);
  REQUIRE(p.samples.size() == 1);
  // One of the two edges follows r + J_r(a)/omega; which one alternates with a.
  const double err = std::min(std::abs(m.samples[0].second - target), std::abs(p.samples[0].second - target));
  CHECK(err < 0.05);
}
