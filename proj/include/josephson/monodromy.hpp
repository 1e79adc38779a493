#pragma once

// Monodromy of the linear system
//   dY/dzeta = [[-a/(2 zeta^2) - b/zeta - a/2, 1/(2 i omega zeta)],
//               [1/(2 i omega zeta),           0                 ]] Y
// around its irregular singular point zeta = 0, and the scalar (double
// confluent Heun) equation satisfied by its second component.

#include <optional>
#include <span>
#include <vector>

#include "josephson/odeint.hpp"
#include "josephson/rotation.hpp"

namespace josephson {

/// zeta -> coefficient matrix; throws DomainError("singular point") at zeta = 0.
MatrixField system_coeff(const JosephsonParams& params);

struct MonodromyResult {
  Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Identity();
  double identity_residual = 0.0;  // max_ij |M - I|_ij
  double det_residual = 0.0;       // |det M - exp(-2 pi i b)|
  cplx eig_discriminant{0.0, 0.0}; // tr^2 - 4 det
  double loop_radius = 1.0;
  Tolerances tol_used;
};

/// Loop radius used by the parameter-only entry points. On |zeta| = 1 the
/// exponent (a/2)(1/zeta - zeta) of the diagonal is purely imaginary, so the
/// transport neither grows nor decays there; any other radius costs
/// exp(|a| |1/r - r| / 2) in dynamic range.
inline constexpr double kDefaultLoopRadius = 1.0;

/// Tighter than the integrator default; the Liouville check needs 1e-6 on det.
Tolerances monodromy_tolerances();

/// Transport of Y = I once counterclockwise around |zeta| = radius, starting
/// at zeta = radius. Throws DomainError("radius too small for this a") when
/// |a| / (2 radius) > 400.
MonodromyResult monodromy_loop(const JosephsonParams& params, double radius = kDefaultLoopRadius,
                               const Tolerances& tol = monodromy_tolerances());

/// identity_residual of the default loop; small values certify trivial
/// monodromy (and with it trivial Stokes data) at zeta = 0.
double triviality_residual(const JosephsonParams& params, const Tolerances& tol = monodromy_tolerances());

/// tr^2 - 4 det of the default loop. Vanishes iff the monodromy has a double eigenvalue.
cplx eig_discriminant(const JosephsonParams& params, const Tolerances& tol = monodromy_tolerances());

inline constexpr double kTrivialityThreshold = 1e-3;
inline constexpr double kTrivialityPolish = 1e-6;

/// Loop over many parameter points (OpenMP). Failed points carry NaN residuals.
std::vector<MonodromyResult> monodromy_sweep(std::span<const JosephsonParams> points,
                                             double radius = kDefaultLoopRadius,
                                             const Tolerances& tol = monodromy_tolerances());
std::vector<MonodromyResult> monodromy_sweep_serial(std::span<const JosephsonParams> points,
                                                    double radius = kDefaultLoopRadius,
                                                    const Tolerances& tol = monodromy_tolerances());

// ---------------------------------------------------------------------------
// DCHE check.
//
// The scalar equation tested is
//   E'' + (2a/z^2 + (b+1)/z - 2a) E' + ((1/(4 omega^2) - 4a^2)/z^2 - 2a(b+1)/z) E = 0
// with E(z) = exp(mu z) x2(kappa z), x2 the second component of a solution of
// the linear system with parameters (system_a, b, omega). Eliminating x1 from
// the system shows the equation holds for system_a = 4a, mu = 2a, kappa = 1;
// with system_a = a no (mu, kappa) makes it hold.

struct DcheParams {
  double a = 0.0;
  double b = 0.0;
  double omega = 1.0;
  double mu = 0.0;
  double kappa = 1.0;
  std::optional<double> system_a;  // parameter a of the linear system; defaults to a
  cplx base_point{1.0, 0.0};       // zeta where the initial data is given
  Eigen::Vector2cd initial{cplx(1.0, 0.0), cplx(1.0, 0.0)};

  void validate() const;
  double effective_system_a() const { return system_a.value_or(a); }
};

/// Max over the samples of |DCHE(E)|, with E', E'' from Ridders-extrapolated
/// central differences of the integrated solution (step 0.1 |z|). Throws
/// DomainError("sample too close to singularity") for |z| < 1e-3 or when
/// the straight path from the base point passes within 1e-2 of zeta = 0.
double dche_residual(const DcheParams& p, std::span<const cplx> sample_z, const Tolerances& tol = monodromy_tolerances());

struct DcheCalibration {
  double mu = 0.0;
  double kappa = 1.0;
  double residual = 0.0;
};

/// Grid search of dche_residual over mu_grid x kappa_grid.
DcheCalibration calibrate_dche(DcheParams p, std::span<const cplx> sample_z, std::span<const double> mu_grid,
                               std::span<const double> kappa_grid, const Tolerances& tol = monodromy_tolerances());

}  // namespace josephson
