#pragma once

// Independent reference values used by the tests. Nothing here calls into
// the library.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using cplx = std::complex<double>;

/// Power series of J_nu(x) in long double; fine for x <= ~15.
inline double bessel_j_series(double nu, double x) {
  long double sum = 0.0L;
  const long double h = 0.5L * x;
  long double term = std::pow(h, static_cast<long double>(nu)) / std::tgamma(static_cast<long double>(nu) + 1.0L);
  for (int k = 0; k < 200; ++k) {
    sum += term;
    term *= -h * h / ((k + 1.0L) * (k + 1.0L + nu));
    if (std::abs(term) < 1e-30L * std::abs(sum) && k > 5) break;
  }
  return static_cast<double>(sum);
}

/// k-th positive zero of J_0 by bisection of the series on a 0.1 sweep.
inline double j0_zero(int k) {
  int seen = 0;
  double a = 0.1;
  double fa = bessel_j_series(0.0, a);
  for (double b = 0.2; b < 40.0; b += 0.1) {
    const double fb = bessel_j_series(0.0, b);
    if (fa * fb < 0.0 && ++seen == k) {
      double lo = a, hi = b, flo = fa;
      for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi), fm = bessel_j_series(0.0, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    a = b;
    fa = fb;
  }
  return NAN;
}

/// Eigenvalues of A1 = [[-b, 1/(2 i omega)], [1/(2 i omega), 0]].
inline std::pair<cplx, cplx> euler_eigenvalues(double b, double omega) {
  const cplx disc = std::sqrt(cplx(b * b - 1.0 / (omega * omega), 0.0));
  return {0.5 * (-b + disc), 0.5 * (-b - disc)};
}

/// True when lambda+ - lambda- = sqrt(b^2 - 1/omega^2) is at least `margin`
/// away from every integer (including 0).
inline bool euler_nonresonant(double b, double omega, double margin) {
  const cplx d = std::sqrt(cplx(b * b - 1.0 / (omega * omega), 0.0));
  if (std::abs(d.imag()) > margin) return true;
  return std::abs(d.real() - std::round(d.real())) > margin;
}

/// exp(2 pi i A1) by Sylvester's formula for distinct eigenvalues.
inline Eigen::Matrix2cd euler_monodromy(double b, double omega) {
  const cplx I(0.0, 1.0);
  const cplx c = 1.0 / (2.0 * I * omega);
  Eigen::Matrix2cd X;
  X << -b, c, c, 0.0;
  X *= 2.0 * std::numbers::pi * I;
  const auto [l1, l2] = euler_eigenvalues(b, omega);
  const cplx m1 = 2.0 * std::numbers::pi * I * l1, m2 = 2.0 * std::numbers::pi * I * l2;
  const Eigen::Matrix2cd Id = Eigen::Matrix2cd::Identity();
  return (std::exp(m1) * (X - m2 * Id) - std::exp(m2) * (X - m1 * Id)) / (m1 - m2);
}

/// Mean of dphi/dtau on the a = 0 axis: 2 pi / T with
/// T = integral over one turn of omega dphi / (B - sin phi). Trapezoid rule,
/// spectrally accurate for the periodic integrand.
inline double rho_axis_quadrature(double b, double omega) {
  const double B = b * omega;
  if (std::abs(B) <= 1.0) return 0.0;
  const int n = 4096;
  double T = 0.0;
  for (int k = 0; k < n; ++k) T += omega / (B - std::sin(2.0 * std::numbers::pi * k / n));
  T *= 2.0 * std::numbers::pi / n;
  return 2.0 * std::numbers::pi / T;
}

}  // namespace oracle
