#pragma once

// Bessel functions of real order and positive argument, and the combination
// u(s) = s^b (J_b(s) + y0 Y_b(s)) whose positive zeros index the adjacency
// chains.

#include <vector>

namespace josephson {

/// J_nu(s), Y_nu(s) and their s-derivatives.
struct BesselValues {
  double J = 0.0;
  double Y = 0.0;
  double dJ = 0.0;
  double dY = 0.0;
};

inline constexpr double kMaxBesselOrder = 50.0;

/// Steed's continued fractions for s >= 2, Temme's series for s < 2, with
/// order recurrence to reach nu. Throws DomainError for s <= 0 ("domain
/// error") or |nu| > 50 ("unsupported order").
BesselValues bessel_pair(double nu, double s);

/// u(s) = s^b (J_b(s) + y0 Y_b(s)); with pure_second_kind set, u(s) = s^b Y_b(s)
/// (the limit y0 -> infinity after rescaling, used when Y_b vanishes at a seed).
struct BesselCombo {
  double order_b = 0.0;
  double y0 = 0.0;
  bool pure_second_kind = false;

  void validate() const;
};

struct UValue {
  double u = 0.0;
  double du = 0.0;   // du/ds, including the derivative of the s^b prefactor
  double z = 0.0;    // J_b + y0 Y_b (no prefactor)
  double dz = 0.0;   // its s-derivative
};

UValue u_eval(const BesselCombo& combo, double s);

/// Positive zeros of u, or of u' (find_critical_points), in increasing order.
struct ZeroList {
  std::vector<double> zeros;
  std::vector<double> residuals;  // |u| (resp. |u'|) at the reported point
  std::vector<bool> refined;      // false when a bracket could not be refined to tolerance
};

/// Zeros of u in [s_min, s_max], at most max_count of them. Sign changes are
/// bracketed on a pi/8 sweep, bisected, then Newton-polished. A dip of |u|
/// without sign change (possible double zero) is reported with refined=false.
ZeroList find_zeros(const BesselCombo& combo, double s_min, double s_max, int max_count);

/// Zeros of du/ds in [s_min, s_max]; same sweep, with u'' taken from the
/// Bessel equation u'' = -((1 - 2b)/s) u' - u.
ZeroList find_critical_points(const BesselCombo& combo, double s_min, double s_max, int max_count);

}  // namespace josephson
