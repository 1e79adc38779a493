#pragma once

// Painleve 3
//   w'' = w'^2/w - w'/tau + alpha w^2/tau + beta/tau + gamma w^3 + delta/w
// its one-parameter Bessel solution w = u'/u, u(s) = s^b (J_b + y0 Y_b),
// and the companion form in t = tau^2, y(t) = sqrt(t) w(sqrt(t)).

#include <functional>
#include <span>
#include <vector>

#include "josephson/errors.hpp"
#include "josephson/odeint.hpp"
#include "josephson/specfun.hpp"

namespace josephson {

struct P3Params {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;
  double delta = -1.0;

  void validate() const;
};

/// (alpha, beta, gamma, delta) = (-2b, 2b - 2, 1, -1).
P3Params params_from_b(double b);

/// Right-hand side w'' of P3.
double p3_rhs(const P3Params& p, double tau, double w, double dw);

/// Right-hand side y'' of the t-form
///   y'' = y'^2/y - y'/t + y^3/(4t^2) - (b/2) y^2/t^2 - 1/(4y) + (b/2 - 1/2)/t.
double p3_tilde_rhs(double b, double t, double y, double dy);

using ScalarFn = std::function<double(double)>;

struct ResidualReport {
  double max_residual = 0.0;
  std::vector<double> used;      // samples that entered the maximum
  std::vector<double> excluded;  // samples dropped near singular points, at w = 0, or where w is not finite
  double derivative_mismatch = 0.0;  // Bessel overload only: max |Riccati w' - numerical w'|
};

/// max |w'' - RHS| with w', w'' from Ridders-extrapolated central differences.
/// The initial step is min(0.1, dist / 2), dist the distance to the nearest
/// entry of `singular`; samples within `exclusion` of one are excluded.
ResidualReport p3_residual(const ScalarFn& w, const P3Params& params, std::span<const double> tau_samples,
                           std::span<const double> singular = {}, double exclusion = 0.05);

class BesselP3Solution;

/// P3 residual of a Bessel solution with w' from the Riccati equation and w''
/// by Ridders differentiation of that w'. One numerical derivative instead of
/// two keeps the check accurate next to poles, where w'' ~ 2/(tau - tau*)^3.
/// Singular points are taken from the solution; derivative_mismatch compares
/// the Riccati w' with a numerical derivative of w.
ResidualReport p3_residual(const BesselP3Solution& sol, const P3Params& params, std::span<const double> tau_samples,
                           double exclusion = 0.05);

/// Same check for the t-form with parameter b.
ResidualReport p3_tilde_residual(const ScalarFn& y, double b, std::span<const double> t_samples,
                                 std::span<const double> singular = {}, double exclusion = 0.05);

/// w(tau) = u'(tau)/u(tau) for one Bessel combination, with the zeros of u
/// (poles of w) and of u' (zeros of w) precomputed on (0, tau_max].
class BesselP3Solution {
 public:
  explicit BesselP3Solution(const BesselCombo& combo, double tau_max = 60.0);

  const BesselCombo& combo() const { return combo_; }
  double tau_max() const { return tau_max_; }
  const std::vector<double>& poles() const { return poles_; }
  const std::vector<double>& zeros() const { return zeros_; }

  /// Throws DomainError("pole of solution") within 1e-8 of a recorded pole,
  /// DomainError for tau <= 0 or tau > tau_max.
  double w(double tau) const;
  /// w' from the Riccati equation w' = -w^2 - (1 - 2b) w / tau - 1.
  double dw(double tau) const;
  double operator()(double tau) const { return w(tau); }

  /// Distance from tau to the nearest recorded pole or zero.
  double distance_to_singular(double tau) const;
  /// Poles followed by zeros, for residual exclusion.
  std::vector<double> singular_points() const;

 private:
  BesselCombo combo_;
  double tau_max_;
  std::vector<double> poles_;
  std::vector<double> zeros_;

  void check(double tau) const;
};

BesselP3Solution bessel_w(const BesselCombo& combo);

/// y(t) = sqrt(t) w(sqrt(t)).
double y_of_t(const BesselP3Solution& sol, double t);

struct ResidueEstimate {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;  // error below 1e-8
};

/// lim (tau - tau*) w(tau) by Richardson extrapolation in h^2 of the
/// symmetric average over offsets +-h. tau_star must be a recorded pole
/// (within 1e-6); otherwise DomainError.
ResidueEstimate pole_residue(const BesselP3Solution& sol, double tau_star);

/// Which special families exist for P3(alpha_hat, beta_hat, 1, -1): Bessel
/// type when alpha_hat + eps beta_hat = 4k + 2, rational when it equals 4k,
/// for some eps = +-1 and integer k (tolerance 1e-9). Both can hold at once.
struct SpecialClass {
  bool bessel_type = false;
  bool rational = false;
  bool none() const { return !bessel_type && !rational; }
};

SpecialClass special_solution_class(double alpha_hat, double beta_hat);

/// Thrown by integrate_p3 when |w| exceeds 1e8; `location` estimates the pole.
class MovingSingularity : public NumericalError {
 public:
  MovingSingularity(double location, double tau_reached);
  double location() const { return location_; }
  double tau_reached() const { return tau_reached_; }

 private:
  double location_;
  double tau_reached_;
};

/// w(tau_end) for P3 integrated as a first-order system in (w, w').
/// Throws DomainError for w0 = 0 or an interval containing tau = 0.
double integrate_p3(const P3Params& params, double tau0, double w0, double w0_prime, double tau_end,
                    const Tolerances& tol = {});

}  // namespace josephson
