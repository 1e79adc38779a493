#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "josephson/adjacency.hpp"
#include "josephson/monodromy.hpp"
#include "oracles.hpp"

using namespace josephson;
using std::numbers::pi;

namespace {
const cplx I(0.0, 1.0);

double max_abs(const Eigen::Matrix2cd& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("system_coeff: entries") {
  Eigen::Matrix2cd e;
  e << 0.0, 1.0 / (2.0 * I), 1.0 / (2.0 * I), 0.0;
  CHECK(max_abs(system_coeff({0.0, 0.0, 1.0})(1.0) - e) < 1e-15);
  e << -3.0, -0.5 * I, -0.5 * I, 0.0;
  CHECK(max_abs(system_coeff({1.0, 2.0, 1.0})(1.0) - e) < 1e-15);
  const cplx z(0.4, -1.3);
  const double a = 1.7, b = -0.6;
  CHECK(std::abs(system_coeff({b, a, 2.0})(z).trace() - (-a / (2.0 * z * z) - b / z - a / 2.0)) < 1e-14);
  CHECK_THROWS_WITH_AS(system_coeff({0.0, 1.0, 1.0})(0.0), "singular point", DomainError);
}

TEST_CASE("monodromy_loop: Euler limit") {
  for (auto [b, w] : {std::pair{0.0, 10.0}, {1.0, 3.0}, {0.5, 10.0}, {2.3, 0.7}}) {
    REQUIRE(oracle::euler_nonresonant(b, w, 0.05));
    const MonodromyResult m = monodromy_loop({b, 0.0, w});
    CHECK(max_abs(m.matrix - oracle::euler_monodromy(b, w)) < 1e-6);
    const auto [l1, l2] = oracle::euler_eigenvalues(b, w);
    const cplx t = std::exp(2.0 * pi * I * l1) + std::exp(2.0 * pi * I * l2);
    CHECK(std::abs(m.matrix.trace() - t) < 1e-6);
  }
}

TEST_CASE("monodromy_loop: Liouville determinant on random parameters") {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> bd(-3.0, 3.0), ad(-10.0, 10.0), wd(0.2, 5.0);
  for (int i = 0; i < 50; ++i) {
    const MonodromyResult m = monodromy_loop({bd(rng), ad(rng), wd(rng)});
    CHECK(m.det_residual < 1e-6);
    CHECK(m.identity_residual >= 0.0);
  }
}

TEST_CASE("monodromy_loop: invariants do not depend on the loop radius") {
  for (JosephsonParams p : {JosephsonParams{0.4, 1.5, 1.0}, JosephsonParams{1.0, 3.0, 0.8}}) {
    const MonodromyResult r1 = monodromy_loop(p, 1.0), r2 = monodromy_loop(p, 2.0);
    CHECK(std::abs(r1.matrix.trace() - r2.matrix.trace()) < 1e-6);
    CHECK(std::abs(r1.matrix.determinant() - r2.matrix.determinant()) < 1e-6);
  }
}

TEST_CASE("monodromy_loop: dynamic-range guard and sweeps") {
  CHECK_THROWS_WITH_AS(monodromy_loop({0.0, 100.0, 1.0}, 0.1), "radius too small for this a", DomainError);
  const std::vector<JosephsonParams> pts{{0.3, 1.0, 1.0}, {1.0, 2.0, 0.5}, {2.0, 0.5, 2.0}};
  const auto par = monodromy_sweep(pts), ser = monodromy_sweep_serial(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(max_abs(par[i].matrix - ser[i].matrix) == 0.0);
}

TEST_CASE("triviality_residual") {
  // Non-integer b: det M = exp(-i pi) = -1, so M cannot be I.
  for (double a : {0.5, 2.0, 7.0}) CHECK(triviality_residual({0.5, a, 1.0}) >= 0.5);
  CHECK(std::isfinite(triviality_residual({1.0, 0.0, 1.0})));
  const AdjacencySeed s = find_seed(1.0, 1.0, 0.5, 6.0);
  CHECK(triviality_residual({1.0, s.a0, 1.0}) < kTrivialityThreshold);
}

TEST_CASE("eig_discriminant") {
  const Eigen::Matrix2cd Id = Eigen::Matrix2cd::Identity();
  CHECK(Id.trace() * Id.trace() - 4.0 * Id.determinant() == cplx(0.0, 0.0));
  const auto [l1, l2] = oracle::euler_eigenvalues(0.5, 10.0);
  const cplx e1 = std::exp(2.0 * pi * I * l1), e2 = std::exp(2.0 * pi * I * l2);
  const cplx d = eig_discriminant({0.5, 0.0, 10.0});
  CHECK(std::abs(d - (e1 - e2) * (e1 - e2)) < 1e-6);
  CHECK(std::abs(d) > 1e-2);
}

TEST_CASE("eig_discriminant: small on a tongue boundary") {
  const std::vector<double> as{1.0};
  for (Side side : {Side::Minus, Side::Plus}) {
    const BoundaryCurve c = trace_boundary(0, side, as, 1.0);
    REQUIRE(c.samples.size() == 1);
    CHECK(std::abs(eig_discriminant({c.samples[0].second, c.samples[0].first, 1.0})) < 1e-2);
  }
}

TEST_CASE("dche_residual: zero solution and calibrated point") {
  const std::vector<cplx> z{{1.5, 0.0}, {1.0, 1.0}, {2.0, -0.5}};
  DcheParams zero;
  zero.a = 0.4;
  zero.b = 0.3;
  zero.initial = Eigen::Vector2cd::Zero();
  CHECK(dche_residual(zero, z) == 0.0);

  std::ifstream in(JOSEPHSON_DATA_DIR "/dche_calibration.json");
  REQUIRE(in.good());
  const auto doc = nlohmann::json::parse(in);
  DcheParams p;
  p.a = doc["a"];
  p.b = doc["b"];
  p.omega = doc["omega"];
  p.system_a = doc["system_a_4a"]["system_a"].get<double>();
  p.mu = doc["system_a_4a"]["mu"];
  p.kappa = doc["system_a_4a"]["kappa"];
  const double r = dche_residual(p, z);
  CHECK(r < 1e-5);
  // Elimination gives mu = 2a, kappa = 1 for system parameter 4a.
  CHECK(std::abs(p.mu - 2.0 * p.a) < 1e-12);
  CHECK(p.kappa == 1.0);

  DcheParams off = p;
  off.mu += 1.0;
  CHECK(dche_residual(off, z) > 10.0 * r);
  // The literal reading (system parameter a) has no good calibration point.
  CHECK(doc["system_a_a"]["residual"].get<double>() > 1e-3);
}

TEST_CASE("dche_residual: calibration search recovers mu = 2a") {
  const std::vector<cplx> z{{1.2, 0.3}, {0.8, -0.9}};
  DcheParams p;
  p.a = 0.5;
  p.b = 1.2;
  p.omega = 0.9;
  p.system_a = 2.0;
  const std::vector<double> mus{0.0, 0.5, 1.0, 1.5}, kappas{0.5, 1.0, 2.0};
  const DcheCalibration c = calibrate_dche(p, z, mus, kappas);
  CHECK(c.mu == 1.0);
  CHECK(c.kappa == 1.0);
  CHECK(c.residual < 1e-5);
}

TEST_CASE("dche_residual: samples too close to the singularity") {
  DcheParams p;
  p.a = 0.2;
  const std::vector<cplx> tiny{{1e-4, 0.0}}, across{{-1.0, 0.0}};
  CHECK_THROWS_WITH_AS(dche_residual(p, tiny), "sample too close to singularity", DomainError);
  CHECK_THROWS_WITH_AS(dche_residual(p, across), "sample too close to singularity", DomainError);
}
