#include "josephson/monodromy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "josephson/numdiff.hpp"

namespace josephson {
namespace {

constexpr cplx kI{0.0, 1.0};

MonodromyResult failed_result(double radius, const Tolerances& tol) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  MonodromyResult r;
  r.matrix.setConstant(cplx(nan, nan));
  r.identity_residual = nan;
  r.det_residual = nan;
  r.eig_discriminant = cplx(nan, nan);
  r.loop_radius = radius;
  r.tol_used = tol;
  return r;
}

template <bool Parallel>
std::vector<MonodromyResult> sweep_impl(std::span<const JosephsonParams> points, double radius,
                                        const Tolerances& tol) {
  std::vector<MonodromyResult> out(points.size());
  const long n = static_cast<long>(points.size());
  auto one = [&](long i) {
    try {
      out[i] = monodromy_loop(points[i], radius, tol);
    } catch (const std::exception&) {
      out[i] = failed_result(radius, tol);
    }
  };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) one(i);
  } else {
    for (long i = 0; i < n; ++i) one(i);
  }
  return out;
}

}  // namespace

MatrixField system_coeff(const JosephsonParams& params) {
  params.validate();
  const double a = params.a, b = params.b, w = params.omega;
  return [=](cplx z) -> Eigen::Matrix2cd {
    if (z == cplx(0.0, 0.0)) throw DomainError("singular point");
    const cplx off = 1.0 / (2.0 * kI * w * z);
    Eigen::Matrix2cd C;
    C << -a / (2.0 * z * z) - b / z - a / 2.0, off, off, cplx(0.0, 0.0);
    return C;
  };
}

Tolerances monodromy_tolerances() {
  Tolerances t;
  t.abs_tol = 1e-12;
  t.rel_tol = 1e-12;
  return t;
}

MonodromyResult monodromy_loop(const JosephsonParams& params, double radius, const Tolerances& tol) {
  params.validate();
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("loop radius must be positive");
  if (std::abs(params.a) / (2.0 * radius) > 400.0) throw DomainError("radius too small for this a");

  const ComplexPath loop = ComplexPath::circle(cplx(0.0, 0.0), radius);
  const Transport tr = transport_along_path(system_coeff(params), Eigen::Matrix2cd::Identity(), loop, tol,
                                            std::span<const cplx>{});
  MonodromyResult r;
  r.matrix = tr.value();
  r.identity_residual = (r.matrix - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  const cplx det = r.matrix.determinant();
  r.det_residual = std::abs(det - std::exp(-2.0 * std::numbers::pi * kI * params.b));
  const cplx trace = r.matrix.trace();
  r.eig_discriminant = trace * trace - 4.0 * det;
  r.loop_radius = radius;
  r.tol_used = tol;
  return r;
}

double triviality_residual(const JosephsonParams& params, const Tolerances& tol) {
  return monodromy_loop(params, kDefaultLoopRadius, tol).identity_residual;
}

cplx eig_discriminant(const JosephsonParams& params, const Tolerances& tol) {
  return monodromy_loop(params, kDefaultLoopRadius, tol).eig_discriminant;
}

std::vector<MonodromyResult> monodromy_sweep(std::span<const JosephsonParams> points, double radius,
                                             const Tolerances& tol) {
  return sweep_impl<true>(points, radius, tol);
}

std::vector<MonodromyResult> monodromy_sweep_serial(std::span<const JosephsonParams> points, double radius,
                                                    const Tolerances& tol) {
  return sweep_impl<false>(points, radius, tol);
}

// ---------------------------------------------------------------------------

void DcheParams::validate() const {
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(mu) || !std::isfinite(kappa))
    throw DomainError("DCHE parameters must be finite");
  if (kappa == 0.0) throw DomainError("kappa must be nonzero");
  if (base_point == cplx(0.0, 0.0)) throw DomainError("base point must avoid zeta = 0");
}

double dche_residual(const DcheParams& p, std::span<const cplx> sample_z, const Tolerances& tol) {
  p.validate();
  const MatrixField coeff = system_coeff({p.b, p.effective_system_a(), p.omega});
  Eigen::Matrix2cd Y0 = Eigen::Matrix2cd::Zero();
  Y0.col(0) = p.initial;

  // x2 at zeta along the straight path from the base point.
  auto x2 = [&](cplx zeta) -> cplx {
    if (zeta == p.base_point) return p.initial(1);
    const ComplexPath path = ComplexPath::segment(p.base_point, zeta);
    if (path.distance_to(cplx(0.0, 0.0)) < 1e-2) throw DomainError("sample too close to singularity");
    return transport_along_path(coeff, Y0, path, tol).value()(1, 0);
  };
  auto E = [&](cplx z) { return std::exp(p.mu * z) * x2(p.kappa * z); };

  const double a = p.a, b = p.b, w = p.omega;
  double worst = 0.0;
  for (const cplx& z : sample_z) {
    if (std::abs(z) < 1e-3) throw DomainError("sample too close to singularity");
    const double h0 = 0.1 * std::abs(z);
    const cplx e0 = E(z);
    const cplx e1 = ridders_first(E, z, h0).value;
    const cplx e2 = ridders_second(E, z, h0).value;
    const cplx P = 2.0 * a / (z * z) + (b + 1.0) / z - 2.0 * a;
    const cplx Q = (1.0 / (4.0 * w * w) - 4.0 * a * a) / (z * z) - 2.0 * a * (b + 1.0) / z;
    worst = std::max(worst, std::abs(e2 + P * e1 + Q * e0));
  }
  return worst;
}

DcheCalibration calibrate_dche(DcheParams p, std::span<const cplx> sample_z, std::span<const double> mu_grid,
                               std::span<const double> kappa_grid, const Tolerances& tol) {
  if (mu_grid.empty() || kappa_grid.empty()) throw DomainError("calibration grid is empty");
  DcheCalibration best;
  best.residual = std::numeric_limits<double>::infinity();
  for (double kappa : kappa_grid) {
    for (double mu : mu_grid) {
      p.mu = mu;
      p.kappa = kappa;
      double r;
      try {
        r = dche_residual(p, sample_z, tol);
      } catch (const DomainError&) {
        continue;
      }
      if (r < best.residual) best = {mu, kappa, r};
    }
  }
  if (!std::isfinite(best.residual)) throw NotFoundError("no admissible calibration point");
  return best;
}

}  // namespace josephson
