#pragma once

// Rotation number of the overdamped Josephson phase equation
//   dphi/dtau = (-sin phi + B + A cos tau) / omega,   B = b omega, A = a omega,
// tongue scans over the (b, a) plane and boundary tracing.

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "josephson/odeint.hpp"

namespace josephson {

inline constexpr double kMinOmega = 1e-3;

struct JosephsonParams {
  double b = 0.0;
  double a = 0.0;
  double omega = 1.0;

  /// Throws DomainError unless all fields are finite and omega >= 1e-3.
  void validate() const;
  double B() const { return b * omega; }
  double A() const { return a * omega; }
};

using PhaseField = std::function<double(double tau, double phi)>;

/// dphi/dtau in the literal form (-sin phi + B + A cos tau) / omega.
PhaseField phase_rhs(const JosephsonParams& params);

/// Lift of the period-2pi Poincare map to the universal cover.
double poincare_lift(const JosephsonParams& params, double phi0, const Tolerances& tol = {});

/// Lifts of several initial phases, integrated as one vector system.
std::vector<double> poincare_lift_batch(const JosephsonParams& params, std::span<const double> phi0,
                                        const Tolerances& tol = {});

struct RotationEstimate {
  double rho = 0.0;          // mean of dphi/dtau, i.e. lim phi(2 pi k) / (2 pi k)
  int periods_used = 0;
  double error_estimate = 0.0;
  bool converged = false;    // error_estimate below kRotationConvergedTol
};

inline constexpr double kRotationConvergedTol = 1e-6;

/// Iterates the lift for up to max_periods (>= 8) periods and averages the
/// per-period increments with a smooth bump-weighted (Birkhoff) mean over
/// doubling windows 8, 16, ..., max_periods. The estimate is the last
/// window's value; error_estimate is the gap to the previous window.
RotationEstimate rotation_number(const JosephsonParams& params, int max_periods = 1024, const Tolerances& tol = {},
                                 double phi0 = 0.0);

/// Closed form on the a = 0 axis: 0 for |b omega| <= 1, otherwise
/// sign(b) sqrt((b omega)^2 - 1) / omega.
double rho_axis_analytic(double b, double omega);

// ---------------------------------------------------------------------------
// Grid scans.

/// Uniform axis lo..hi with n >= 2 nodes (lo == hi allowed).
struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 2;

  double at(int i) const;
  std::vector<double> nodes() const;
};

struct TongueGrid {
  std::vector<double> b_axis;
  std::vector<double> a_axis;
  double omega = 1.0;
  /// Row-major by a: rho_values[ia * b_axis.size() + ib].
  std::vector<RotationEstimate> rho_values;

  const RotationEstimate& at(std::size_t ib, std::size_t ia) const { return rho_values[ia * b_axis.size() + ib]; }
};

/// Rotation number at every node. Cells are independent; failures are
/// recorded as rho = NaN with infinite error_estimate. OpenMP-parallel.
TongueGrid scan_grid(const Axis& b_axis, const Axis& a_axis, double omega, int max_periods = 1024,
                     const Tolerances& tol = {});

/// Serial reference implementation of scan_grid (identical results).
TongueGrid scan_grid_serial(const Axis& b_axis, const Axis& a_axis, double omega, int max_periods = 1024,
                            const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Plateaus and their edges.

/// Range of the displacement D(phi) = P(phi) - phi - 2 pi r over one circle.
/// The parameter point lies in the closed tongue rho = r iff
/// min <= 0 <= max. Both ends are increasing in b.
struct DisplacementRange {
  double min = 0.0;
  double max = 0.0;
  bool contains_zero() const { return min <= 0.0 && max >= 0.0; }
};

DisplacementRange displacement_range(const JosephsonParams& params, int r, const Tolerances& tol = {},
                                     int samples = 48);

/// Phase-locking test from a rotation estimate: |rho - nearest integer| < 1e-4
/// and unchanged (within 1e-4) under b -> b +- 1e-3.
bool is_phase_locked(const JosephsonParams& params, int max_periods = 1024, const Tolerances& tol = {});

enum class Side { Minus, Plus };

/// (a, b) samples of one edge of tongue r. Minus is the edge where rho
/// enters the plateau from below (smaller b), Plus where it leaves it.
struct BoundaryCurve {
  int r = 0;
  Side side = Side::Minus;
  std::vector<std::pair<double, double>> samples;  // (a, b)
  std::vector<double> omitted_a;                   // a values where no edge could be bracketed
};

/// Edge b(a) of the plateau rho = r for each a, bisected to |db| < 1e-6
/// inside the a-priori bracket |b - r| <= 1/omega (widened by 0.1%).
BoundaryCurve trace_boundary(int r, Side side, std::span<const double> a_samples, double omega,
                             const Tolerances& tol = {});

/// Single edge point; throws NotFoundError if no edge is bracketed.
double boundary_point(int r, Side side, double a, double omega, const Tolerances& tol = {},
                      double b_tol = 1e-6);

}  // namespace josephson
