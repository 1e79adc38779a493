#include "josephson/rotation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace josephson {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Scalar1 = Eigen::Matrix<double, 1, 1>;

// Smooth bump weight on (0, 1), vanishing with all derivatives at both ends.
double bump(double t) { return std::exp(-1.0 / (t * (1.0 - t))); }

double weighted_mean(const std::vector<double>& inc, std::size_t n) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = bump((static_cast<double>(k) + 0.5) / static_cast<double>(n));
    num += w * inc[k];
    den += w;
  }
  return num / den;
}

RotationEstimate failed_cell() {
  RotationEstimate e;
  e.rho = std::numeric_limits<double>::quiet_NaN();
  e.error_estimate = std::numeric_limits<double>::infinity();
  e.converged = false;
  return e;
}

template <bool Parallel>
TongueGrid scan_impl(const Axis& b_axis, const Axis& a_axis, double omega, int max_periods, const Tolerances& tol) {
  if (b_axis.n < 2 || a_axis.n < 2) throw DomainError("grid resolution must be at least 2 per axis");
  JosephsonParams{0.0, 0.0, omega}.validate();
  tol.validate();
  TongueGrid grid;
  grid.b_axis = b_axis.nodes();
  grid.a_axis = a_axis.nodes();
  grid.omega = omega;
  const long nb = b_axis.n, na = a_axis.n;
  grid.rho_values.assign(static_cast<std::size_t>(nb * na), RotationEstimate{});

  auto cell = [&](long idx) {
    const long ia = idx / nb, ib = idx % nb;
    try {
      grid.rho_values[idx] = rotation_number({grid.b_axis[ib], grid.a_axis[ia], omega}, max_periods, tol);
    } catch (const std::exception&) {
      grid.rho_values[idx] = failed_cell();
    }
  };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long idx = 0; idx < nb * na; ++idx) cell(idx);
  } else {
    for (long idx = 0; idx < nb * na; ++idx) cell(idx);
  }
  return grid;
}

}  // namespace

void JosephsonParams::validate() const {
  if (!std::isfinite(b) || !std::isfinite(a) || !std::isfinite(omega))
    throw DomainError("Josephson parameters must be finite");
  if (omega < kMinOmega) throw DomainError("omega must be at least 1e-3");
}

PhaseField phase_rhs(const JosephsonParams& params) {
  params.validate();
  const double B = params.B(), A = params.A(), w = params.omega;
  return [=](double tau, double phi) { return (-std::sin(phi) + B + A * std::cos(tau)) / w; };
}

double poincare_lift(const JosephsonParams& params, double phi0, const Tolerances& tol) {
  params.validate();
  const double B = params.B(), A = params.A(), w = params.omega;
  auto field = [=](double tau, const Scalar1& y) {
    Scalar1 d;
    d(0) = (-std::sin(y(0)) + B + A * std::cos(tau)) / w;
    return d;
  };
  Scalar1 y0;
  y0(0) = phi0;
  return dopri45<Scalar1>(field, 0.0, y0, kTwoPi, tol).y(0);
}

std::vector<double> poincare_lift_batch(const JosephsonParams& params, std::span<const double> phi0,
                                        const Tolerances& tol) {
  params.validate();
  if (phi0.empty()) return {};
  const double B = params.B(), A = params.A(), w = params.omega;
  auto field = [=](double tau, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return ((B + A * std::cos(tau)) - y.array().sin()).matrix() / w;
  };
  Eigen::VectorXd y0 = Eigen::Map<const Eigen::VectorXd>(phi0.data(), static_cast<Eigen::Index>(phi0.size()));
  const Eigen::VectorXd y = dopri45<Eigen::VectorXd>(field, 0.0, y0, kTwoPi, tol).y;
  return {y.data(), y.data() + y.size()};
}

RotationEstimate rotation_number(const JosephsonParams& params, int max_periods, const Tolerances& tol,
                                 double phi0) {
  params.validate();
  if (max_periods < 8) throw DomainError("max_periods must be at least 8");

  std::vector<double> inc;
  inc.reserve(static_cast<std::size_t>(max_periods));
  double phi = phi0;
  auto advance_to = [&](std::size_t n) {
    while (inc.size() < n) {
      const double next = poincare_lift(params, phi, tol);
      inc.push_back(next - phi);
      phi = next;
    }
  };

  RotationEstimate est;
  double prev = std::numeric_limits<double>::quiet_NaN();
  double prev_gap = std::numeric_limits<double>::infinity();
  for (std::size_t n = 8;; n *= 2) {
    if (n > static_cast<std::size_t>(max_periods)) n = static_cast<std::size_t>(max_periods);
    advance_to(n);
    const double value = weighted_mean(inc, n) / kTwoPi;
    est.rho = value;
    est.periods_used = static_cast<int>(n);
    const double gap = std::isnan(prev) ? std::numeric_limits<double>::infinity() : std::abs(value - prev);
    est.error_estimate = gap;
    // Two consecutive tiny gaps: the weighted mean has converged.
    if (n >= 64 && gap < 1e-12 && prev_gap < 1e-10) break;
    if (n == static_cast<std::size_t>(max_periods)) break;
    prev = value;
    prev_gap = gap;
  }
  if (!std::isfinite(est.error_estimate)) est.error_estimate = std::numeric_limits<double>::max();
  est.converged = est.error_estimate < kRotationConvergedTol;
  return est;
}

double rho_axis_analytic(double b, double omega) {
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  const double B = b * omega;
  if (std::abs(B) <= 1.0) return 0.0;
  return std::copysign(std::sqrt(B * B - 1.0) / omega, b);
}

double Axis::at(int i) const {
  if (n < 2) throw DomainError("axis needs at least 2 nodes");
  if (i == n - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

std::vector<double> Axis::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = at(i);
  return out;
}

TongueGrid scan_grid(const Axis& b_axis, const Axis& a_axis, double omega, int max_periods, const Tolerances& tol) {
  return scan_impl<true>(b_axis, a_axis, omega, max_periods, tol);
}

TongueGrid scan_grid_serial(const Axis& b_axis, const Axis& a_axis, double omega, int max_periods,
                            const Tolerances& tol) {
  return scan_impl<false>(b_axis, a_axis, omega, max_periods, tol);
}

DisplacementRange displacement_range(const JosephsonParams& params, int r, const Tolerances& tol, int samples) {
  params.validate();
  if (samples < 8) throw DomainError("displacement_range needs at least 8 samples");
  std::vector<double> phis(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) phis[static_cast<std::size_t>(j)] = kTwoPi * j / samples;
  const std::vector<double> lifted = poincare_lift_batch(params, phis, tol);
  const double shift = kTwoPi * r;
  auto disp = [&](double phi) { return poincare_lift(params, phi, tol) - phi - shift; };

  std::size_t jmax = 0, jmin = 0;
  std::vector<double> d(phis.size());
  for (std::size_t j = 0; j < phis.size(); ++j) {
    d[j] = lifted[j] - phis[j] - shift;
    if (d[j] > d[jmax]) jmax = j;
    if (d[j] < d[jmin]) jmin = j;
  }
  // Golden-section refinement of an extremum on the neighbouring cells.
  const double cell = kTwoPi / samples;
  auto refine = [&](std::size_t j, double sign) {
    double lo = phis[j] - cell, hi = phis[j] + cell;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = sign * disp(x1), f2 = sign * disp(x2);
    for (int it = 0; it < 30; ++it) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = sign * disp(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = sign * disp(x2);
      }
    }
    return sign * std::max({f1, f2, sign * d[j]});
  };
  return {refine(jmin, -1.0), refine(jmax, 1.0)};
}

bool is_phase_locked(const JosephsonParams& params, int max_periods, const Tolerances& tol) {
  const RotationEstimate c = rotation_number(params, max_periods, tol);
  const double r = std::round(c.rho);
  if (std::abs(c.rho - r) >= 1e-4) return false;
  for (double db : {-1e-3, 1e-3}) {
    JosephsonParams p = params;
    p.b += db;
    if (std::abs(rotation_number(p, max_periods, tol).rho - r) >= 1e-4) return false;
  }
  return true;
}

double boundary_point(int r, Side side, double a, double omega, const Tolerances& tol, double b_tol) {
  JosephsonParams{0.0, a, omega}.validate();
  auto edge_fn = [&](double b) {
    const DisplacementRange d = displacement_range({b, a, omega}, r, tol);
    return side == Side::Minus ? d.max : d.min;
  };
  // Averaging the phase equation over one locked period gives |b - r| <= 1/omega,
  // with equality on the a = 0 axis; the margin keeps those edges inside the bracket.
  const double half = (1.0 + 1e-3) / omega;
  double lo = r - half, hi = r + half;
  double flo = edge_fn(lo), fhi = edge_fn(hi);
  if (!(flo < 0.0 && fhi > 0.0)) throw NotFoundError("no plateau edge bracketed");
  while (hi - lo > b_tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = edge_fn(mid);
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

BoundaryCurve trace_boundary(int r, Side side, std::span<const double> a_samples, double omega,
                             const Tolerances& tol) {
  if (r < 0) throw DomainError("tongue index r must be non-negative");
  for (std::size_t i = 0; i < a_samples.size(); ++i) {
    if (!(a_samples[i] >= 0.0)) throw DomainError("a samples must be non-negative");
    if (i > 0 && !(a_samples[i] > a_samples[i - 1])) throw DomainError("a samples must be increasing");
  }
  BoundaryCurve curve;
  curve.r = r;
  curve.side = side;
  for (double a : a_samples) {
    try {
      curve.samples.emplace_back(a, boundary_point(r, side, a, omega, tol));
    } catch (const NotFoundError&) {
      curve.omitted_a.push_back(a);
    } catch (const NumericalError&) {
      curve.omitted_a.push_back(a);
    }
  }
  return curve;
}

}  // namespace josephson
