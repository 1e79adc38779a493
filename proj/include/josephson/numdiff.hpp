#pragma once

// Ridders' extrapolated central differences. Used wherever a residual must be
// checked without reusing the analytic derivative of the object under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace josephson {

template <class T>
struct Derivative {
  T value{};
  double error = std::numeric_limits<double>::infinity();
};

namespace detail {

template <class T, class Diff>
Derivative<T> ridders_tableau(Diff&& diff, double h0) {
  constexpr int kTab = 12;
  constexpr double kCon = 1.4, kCon2 = kCon * kCon, kSafe = 2.0;
  std::array<std::array<T, kTab>, kTab> a{};
  Derivative<T> best;
  double h = h0;
  a[0][0] = diff(h);
  for (int i = 1; i < kTab; ++i) {
    h /= kCon;
    a[0][i] = diff(h);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double errt = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
      if (errt <= best.error) {
        best.error = errt;
        best.value = a[j][i];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= kSafe * best.error) break;
  }
  return best;
}

}  // namespace detail

/// f'(x) along the real direction; f may be real- or complex-valued.
template <class F, class X>
auto ridders_first(F&& f, X x, double h0) {
  using T = decltype(f(x));
  return detail::ridders_tableau<T>([&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }, h0);
}

/// f''(x) along the real direction.
template <class F, class X>
auto ridders_second(F&& f, X x, double h0) {
  using T = decltype(f(x));
  const T fx = f(x);
  return detail::ridders_tableau<T>([&](double h) { return (f(x + h) - 2.0 * fx + f(x - h)) / (h * h); }, h0);
}

}  // namespace josephson
