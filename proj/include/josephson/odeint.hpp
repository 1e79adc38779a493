#pragma once

// Embedded Runge-Kutta integration (Dormand-Prince 5(4), PI step control)
// for real vector fields and for 2x2 complex linear systems transported
// along parametrized paths in the complex plane.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "josephson/errors.hpp"

namespace josephson {

using cplx = std::complex<double>;

struct Tolerances {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long max_steps = 10'000'000;

  /// Throws DomainError unless abs_tol > 0, rel_tol > 0, max_steps >= 1.
  void validate() const;
  /// Both tolerances multiplied by `factor`; max_steps unchanged.
  Tolerances scaled(double factor) const;
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  /// Sum of the embedded local error estimates (max-norm) over accepted
  /// steps. A conservative proxy for the global error on non-expanding
  /// problems.
  double error_estimate = 0.0;
};

template <class State>
struct Integration {
  State y;
  double t = 0.0;
  StepStats stats;
  bool stopped = false;  // observer requested an early stop
};

/// Observer that never intervenes.
struct NoObserver {
  template <class State>
  bool operator()(double, State&) const {
    return true;
  }
};

namespace detail {

template <class State>
double scaled_rms(const State& err, const State& y0, const State& y1, const Tolerances& tol) {
  const auto sk = (tol.abs_tol + tol.rel_tol * y0.cwiseAbs().array().max(y1.cwiseAbs().array())).eval();
  const auto ratio = (err.cwiseAbs().array() / sk).eval();
  return std::sqrt(ratio.square().sum() / static_cast<double>(ratio.size()));
}

template <class State>
bool all_finite(const State& y) {
  return y.allFinite();
}

}  // namespace detail

/// Dormand-Prince 5(4) with Hairer's PI controller. `field(t, y)` returns
/// dy/dt. `observer(t, y)` runs after every accepted step; it may rescale
/// `y` in place (linear problems) and returns false to stop early.
/// Integrates backwards when t1 < t0.
template <class State, class Field, class Observer = NoObserver>
Integration<State> dopri45(Field&& field, double t0, const State& y0, double t1, const Tolerances& tol,
                           Observer&& observer = Observer{}) {
  tol.validate();
  Integration<State> out{y0, t0, {}, false};
  if (t1 == t0) return out;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  // PI controller constants (Hairer, Norsett & Wanner II.4).
  constexpr double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9, fac_min = 0.2, fac_max = 10.0;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  State y = y0;
  double t = t0;
  State k1 = field(t, y);
  if (!detail::all_finite(k1)) throw NumericalError("blow-up detected");

  // Initial step guess.
  double h;
  {
    const State zero = (y * 0.0).eval();
    const double d0 = detail::scaled_rms(y, zero, zero, tol);
    const double d1 = detail::scaled_rms(k1, zero, zero, tol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    const State y1 = (y + (dir * h0) * k1).eval();
    const State f1 = field(t + dir * h0, y1);
    const double d2 = detail::scaled_rms((f1 - k1).eval(), zero, zero, tol) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    h = std::min({100.0 * h0, h1, span});
  }

  double fac_old = 1e-4;
  bool last_rejected = false;
  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > tol.max_steps) throw NumericalError("max_steps exceeded");
    const double remaining = std::abs(t1 - t);
    bool final_step = false;
    if (h >= remaining * (1.0 - 1e-12)) {
      h = remaining;
      final_step = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) throw NumericalError("step size underflow");
    const double hs = dir * h;

    const State k2 = field(t + c2 * hs, (y + hs * (a21 * k1)).eval());
    const State k3 = field(t + c3 * hs, (y + hs * (a31 * k1 + a32 * k2)).eval());
    const State k4 = field(t + c4 * hs, (y + hs * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const State k5 = field(t + c5 * hs, (y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const State k6 =
        field(t + hs, (y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    const State y_new = (y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6)).eval();
    const State k7 = field(t + hs, y_new);
    const State err = (hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).eval();

    if (!detail::all_finite(y_new) || !detail::all_finite(k7)) {
      // Retry with a smaller step before declaring blow-up.
      h *= 0.25;
      ++out.stats.rejected;
      if (h < 1e-14 * std::max(1.0, std::abs(t))) throw NumericalError("blow-up detected");
      last_rejected = true;
      continue;
    }

    const double err_norm = detail::scaled_rms(err, y, y_new, tol);
    const double fac11 = std::pow(std::max(err_norm, 1e-300), expo1);
    if (err_norm <= 1.0) {
      double fac = fac11 / std::pow(fac_old, beta);
      fac = std::clamp(fac / safe, 1.0 / fac_max, 1.0 / fac_min);
      double h_new = h / fac;
      if (last_rejected) h_new = std::min(h_new, h);
      fac_old = std::max(err_norm, 1e-4);

      out.stats.error_estimate += err.cwiseAbs().maxCoeff();
      ++out.stats.accepted;
      t = final_step ? t1 : t + hs;
      y = y_new;
      k1 = k7;
      last_rejected = false;
      if (!observer(t, y)) {
        out.stopped = true;
        break;
      }
      // The observer may have rescaled y; keep FSAL consistent.
      if (!(y_new.cwiseEqual(y).all())) k1 = field(t, y);
      h = h_new;
    } else {
      ++out.stats.rejected;
      h /= std::min(1.0 / fac_min, fac11 / safe);
      last_rejected = true;
    }
  }
  out.y = y;
  out.t = t;
  return out;
}

// ---------------------------------------------------------------------------
// Real vector fields.

using RealField = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// End state of y' = field(t, y) on [t0, t1] plus integration statistics.
Integration<Eigen::VectorXd> integrate_real(const RealField& field, const Eigen::VectorXd& y0, double t0,
                                            double t1, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Paths in the complex plane.

/// A C^1 map s in [0,1] -> C: either a circular arc or a straight segment.
class ComplexPath {
 public:
  /// Full circle(s) about `center`; counterclockwise for turns > 0.
  static ComplexPath circle(cplx center, double radius, int turns = 1, double start_angle = 0.0);
  /// Arc of the circle |z - center| = radius from angle theta0 to theta1.
  static ComplexPath arc(cplx center, double radius, double theta0, double theta1);
  static ComplexPath segment(cplx from, cplx to);

  cplx point(double s) const;
  /// dz/ds.
  cplx tangent(double s) const;
  ComplexPath reversed() const;
  /// Minimum distance from the path to `p`.
  double distance_to(cplx p) const;
  bool closed() const;
  const std::string& tag() const { return tag_; }

 private:
  enum class Kind { Arc, Segment };
  Kind kind_ = Kind::Segment;
  cplx center_{}, from_{}, to_{};
  double radius_ = 0.0, theta0_ = 0.0, theta1_ = 0.0;
  std::string tag_;
};

using MatrixField = std::function<Eigen::Matrix2cd(cplx)>;

/// Fundamental-matrix transport with the running scale kept separately:
/// the transported matrix equals exp(log_scale) * matrix.
struct Transport {
  Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Identity();
  double log_scale = 0.0;
  StepStats stats;

  Eigen::Matrix2cd value() const { return matrix * std::exp(log_scale); }
};

/// Solves dY/dz = coeff(z) Y along `path` starting from Y0. Entries are
/// renormalized whenever they exceed 1e100 in magnitude.
/// Throws DomainError("singular path") if the path passes within 1e-12 of
/// any point of `singular_points`.
Transport transport_along_path(const MatrixField& coeff, const Eigen::Matrix2cd& Y0, const ComplexPath& path,
                               const Tolerances& tol = {},
                               std::span<const cplx> singular_points = std::span<const cplx>{});

/// transport_along_path(...).value() with the origin as the singular set.
Eigen::Matrix2cd integrate_matrix_along_path(const MatrixField& coeff, const Eigen::Matrix2cd& Y0,
                                             const ComplexPath& path, const Tolerances& tol = {});

}  // namespace josephson
