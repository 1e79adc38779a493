#include "josephson/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "josephson/numdiff.hpp"

namespace josephson {
namespace {

double nearest_distance(double x, std::span<const double> pts) {
  double d = std::numeric_limits<double>::infinity();
  for (double p : pts) d = std::min(d, std::abs(x - p));
  return d;
}

template <class Rhs>
ResidualReport residual_impl(const ScalarFn& f, Rhs&& rhs, std::span<const double> samples,
                             std::span<const double> singular, double exclusion) {
  ResidualReport rep;
  for (double x : samples) {
    if (!(x > 0.0)) throw DomainError("samples must be positive");
    const double dist = nearest_distance(x, singular);
    if (dist < exclusion) {
      rep.excluded.push_back(x);
      continue;
    }
    double v;
    try {
      v = f(x);
    } catch (const DomainError&) {
      rep.excluded.push_back(x);
      continue;
    }
    if (!std::isfinite(v) || std::abs(v) < 1e-8) {
      rep.excluded.push_back(x);
      continue;
    }
    const double h0 = std::min({0.1, 0.5 * dist, 0.5 * x});
    const double d1 = ridders_first(f, x, h0).value;
    const double d2 = ridders_second(f, x, h0).value;
    rep.max_residual = std::max(rep.max_residual, std::abs(d2 - rhs(x, v, d1)));
    rep.used.push_back(x);
  }
  return rep;
}

}  // namespace

void P3Params::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma) || !std::isfinite(delta))
    throw DomainError("P3 parameters must be finite");
}

P3Params params_from_b(double b) { return {-2.0 * b, 2.0 * b - 2.0, 1.0, -1.0}; }

double p3_rhs(const P3Params& p, double tau, double w, double dw) {
  return dw * dw / w - dw / tau + p.alpha * w * w / tau + p.beta / tau + p.gamma * w * w * w + p.delta / w;
}

double p3_tilde_rhs(double b, double t, double y, double dy) {
  return dy * dy / y - dy / t + 0.25 * y * y * y / (t * t) - 0.5 * b * y * y / (t * t) - 0.25 / y +
         (0.5 * b - 0.5) / t;
}

ResidualReport p3_residual(const ScalarFn& w, const P3Params& params, std::span<const double> tau_samples,
                           std::span<const double> singular, double exclusion) {
  params.validate();
  return residual_impl(
      w, [&](double x, double v, double d) { return p3_rhs(params, x, v, d); }, tau_samples, singular, exclusion);
}

ResidualReport p3_residual(const BesselP3Solution& sol, const P3Params& params, std::span<const double> tau_samples,
                           double exclusion) {
  params.validate();
  const std::vector<double> singular = sol.singular_points();
  const ScalarFn w = [&sol](double t) { return sol.w(t); };
  const ScalarFn dw = [&sol](double t) { return sol.dw(t); };
  ResidualReport rep;
  for (double x : tau_samples) {
    const double dist = nearest_distance(x, singular);
    if (dist < exclusion || !(x > 0.0) || x > sol.tau_max()) {
      rep.excluded.push_back(x);
      continue;
    }
    const double v = sol.w(x);
    if (!std::isfinite(v) || std::abs(v) < 1e-8) {
      rep.excluded.push_back(x);
      continue;
    }
    const double h0 = std::min({0.1, 0.5 * dist, 0.5 * x});
    const double d1 = dw(x);
    const double d2 = ridders_first(dw, x, h0).value;
    rep.derivative_mismatch = std::max(rep.derivative_mismatch, std::abs(ridders_first(w, x, h0).value - d1));
    rep.max_residual = std::max(rep.max_residual, std::abs(d2 - p3_rhs(params, x, v, d1)));
    rep.used.push_back(x);
  }
  return rep;
}

ResidualReport p3_tilde_residual(const ScalarFn& y, double b, std::span<const double> t_samples,
                                 std::span<const double> singular, double exclusion) {
  return residual_impl(
      y, [&](double x, double v, double d) { return p3_tilde_rhs(b, x, v, d); }, t_samples, singular, exclusion);
}

// ---------------------------------------------------------------------------

BesselP3Solution::BesselP3Solution(const BesselCombo& combo, double tau_max) : combo_(combo), tau_max_(tau_max) {
  combo_.validate();
  if (!(tau_max > 1e-3) || !std::isfinite(tau_max)) throw DomainError("tau_max must be finite and > 1e-3");
  poles_ = find_zeros(combo_, 1e-3, tau_max_, 100000).zeros;
  zeros_ = find_critical_points(combo_, 1e-3, tau_max_, 100000).zeros;
}

void BesselP3Solution::check(double tau) const {
  if (!(tau > 0.0)) throw DomainError("tau must be positive");
  if (tau > tau_max_) throw DomainError("tau beyond the solution's working range");
  if (nearest_distance(tau, poles_) < 1e-8) throw DomainError("pole of solution");
}

double BesselP3Solution::w(double tau) const {
  check(tau);
  const UValue v = u_eval(combo_, tau);
  return v.du / v.u;
}

double BesselP3Solution::dw(double tau) const {
  const double ww = w(tau);
  return -ww * ww - (1.0 - 2.0 * combo_.order_b) * ww / tau - 1.0;
}

double BesselP3Solution::distance_to_singular(double tau) const {
  return std::min(nearest_distance(tau, poles_), nearest_distance(tau, zeros_));
}

std::vector<double> BesselP3Solution::singular_points() const {
  std::vector<double> out = poles_;
  out.insert(out.end(), zeros_.begin(), zeros_.end());
  return out;
}

BesselP3Solution bessel_w(const BesselCombo& combo) { return BesselP3Solution(combo); }

double y_of_t(const BesselP3Solution& sol, double t) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  const double s = std::sqrt(t);
  return s * sol.w(s);
}

ResidueEstimate pole_residue(const BesselP3Solution& sol, double tau_star) {
  const auto& poles = sol.poles();
  auto it = std::min_element(poles.begin(), poles.end(),
                             [&](double x, double y) { return std::abs(x - tau_star) < std::abs(y - tau_star); });
  if (it == poles.end() || std::abs(*it - tau_star) > 1e-6) throw DomainError("tau_star is not a recorded pole");
  const double p = *it;

  double gap = 0.5 * p;
  for (double q : poles)
    if (q != p) gap = std::min(gap, std::abs(q - p));
  for (double z : sol.zeros()) gap = std::min(gap, std::abs(z - p));
  const double h0 = std::min(0.1, 0.5 * gap);

  auto sym = [&](double h) { return 0.5 * (h * sol.w(p + h) - h * sol.w(p - h)); };
  const Derivative<double> d = detail::ridders_tableau<double>(sym, h0);
  ResidueEstimate est;
  est.value = d.value;
  est.error = d.error;
  est.converged = d.error < 1e-8;
  return est;
}

SpecialClass special_solution_class(double alpha_hat, double beta_hat) {
  constexpr double kTol = 1e-9;
  SpecialClass c;
  for (double eps : {1.0, -1.0}) {
    const double s = alpha_hat + eps * beta_hat;
    // s = 4k + 2  <=>  (s - 2)/4 integer;  s = 4k  <=>  s/4 integer.
    const double kb = (s - 2.0) / 4.0, kr = s / 4.0;
    if (std::abs(kb - std::round(kb)) * 4.0 < kTol) c.bessel_type = true;
    if (std::abs(kr - std::round(kr)) * 4.0 < kTol) c.rational = true;
  }
  return c;
}

MovingSingularity::MovingSingularity(double location, double tau_reached)
    : NumericalError("moving singularity reached"), location_(location), tau_reached_(tau_reached) {}

double integrate_p3(const P3Params& params, double tau0, double w0, double w0_prime, double tau_end,
                    const Tolerances& tol) {
  params.validate();
  if (w0 == 0.0) throw DomainError("P3 is singular at w = 0");
  if (!(tau0 > 0.0) || !(tau_end > 0.0)) throw DomainError("interval must exclude tau = 0");
  using State = Eigen::Vector2d;
  auto field = [&](double tau, const State& y) {
    State d;
    d << y(1), p3_rhs(params, tau, y(0), y(1));
    return d;
  };
  auto guard = [](double, State& y) { return std::abs(y(0)) <= 1e8; };
  const auto res = dopri45<State>(field, tau0, State(w0, w0_prime), tau_end, tol, guard);
  if (res.stopped) {
    // Near a simple pole w ~ r/(tau - tau*), so tau* ~ tau + w/w'.
    throw MovingSingularity(res.t + res.y(0) / res.y(1), res.t);
  }
  return res.y(0);
}

}  // namespace josephson
