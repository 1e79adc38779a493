#pragma once

// Isomonodromic family
//   dY/dz = (-(t/z^2) A(t) + B(t)/z + diag(-1/2, 0)) Y,   dY/dt = A(t)/z Y
// built from the Bessel solution y(t) = sqrt(t) w(sqrt(t)), with
//   A = G diag(1/2, 0) G^{-1},  G = [[g1, h/g1], [g3, (g1 + g3 h)/g1^2]],  g1 = 1,
//   g3 = C1 u(sqrt t),  b2' = -h/4,  y = 2 b2 / h,
//   b3 = b2 g3/(g1 h) + g3 (-b g1 + b2 g3)/g1^2,
//   B = [[-b, b2], [b3, 0]].

#include <functional>
#include <span>
#include <vector>

#include "josephson/odeint.hpp"
#include "josephson/painleve.hpp"

namespace josephson {

struct IsoFamilyParams {
  double b = 0.0;
  BesselCombo combo;         // order must equal b
  double b2_0 = 1.0;         // b2 at t_ref
  double C1_tilde = 1.0;
  double t_ref = 0.25;
  double t_max = 400.0;      // working range (0, t_max]
  bool freeze_b2 = false;    // negative control: b2 held at b2_0 instead of solving b2' = -h/4

  void validate() const;
};

struct FamilyCoeffs {
  Eigen::Matrix2cd A = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd B = Eigen::Matrix2cd::Zero();
  double h = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double g3_over_g1 = 0.0;
  double y = 0.0;
};

class IsoFamily {
 public:
  explicit IsoFamily(const IsoFamilyParams& params);

  const IsoFamilyParams& params() const { return params_; }
  const BesselP3Solution& solution() const { return sol_; }

  /// y(t) of the underlying Bessel solution.
  double y(double t) const;

  /// (b2, h) at t. With y = 2 b2/h and b2' = -h/4 the pair solves the linear
  /// system b2' = -h/4, t h' = b2 - b h, which is regular for t > 0; it is
  /// integrated from t_ref with h(t_ref) = 2 b2_0 / y(t_ref).
  std::pair<double, double> b2_h(double t) const;

 private:
  IsoFamilyParams params_;
  BesselP3Solution sol_;
  double h_ref_ = 0.0;
};

/// Coefficients at t. Throws DomainError("pole of solution") when sqrt(t)
/// is within 1e-8 of a zero of u (where h = 0 and b3 has a removable 0/0).
FamilyCoeffs family_at(const IsoFamily& fam, double t);

/// z -> -(t/z^2) A + B/z + diag(-1/2, 0).
MatrixField z_equation(const IsoFamily& fam, double t);
/// z -> A/z.
MatrixField t_equation(const IsoFamily& fam, double t);

using LaxCoeffFn = std::function<FamilyCoeffs(double t)>;

struct CurvatureReport {
  double max_residual = 0.0;
  std::vector<double> excluded_t;
};

/// max ||d_t M_z - d_z M_t + [M_z, M_t]|| over the grid, partials by
/// centered differences with steps 1e-5 |t| and 1e-5 |z|.
CurvatureReport zero_curvature_residual(const LaxCoeffFn& coeffs, std::span<const cplx> z_samples,
                                        std::span<const double> t_samples);
CurvatureReport zero_curvature_residual(const IsoFamily& fam, std::span<const cplx> z_samples,
                                        std::span<const double> t_samples);

/// max |tr M(t) - tr M(t_1)|, M(t) the monodromy of the z-equation around
/// |z| = sqrt(t) radius.
double isomonodromy_drift(const IsoFamily& fam, std::span<const double> t_list, double radius = 1.0,
                          const Tolerances& tol = {1e-12, 1e-12, 10'000'000});

struct PoleSpecialization {
  double t_star = 0.0;
  double b2_star = 0.0;
  double b3_star = 0.0;
  /// z -> [[-t*/(2 z^2) - b/z - 1/2, b2*/z], [b3*/z, 0]].
  MatrixField system;
  /// Same system in zeta = z / sqrt(t*):
  /// [[-a*/(2 zeta^2) - b/zeta - a*/2, b2*/zeta], [b3*/zeta, 0]], a* = sqrt(t*).
  MatrixField system_zeta;
};

/// Specialization at t* with sqrt(t*) a recorded zero of u. There h = 0, so
/// A = diag(1/2, 0), and b3 -> C1 sqrt(t*) u'(sqrt t*) / 2 = t du/dt C1.
/// Throws DomainError("double zero, specialization invalid") when
/// |u'(sqrt t*)| < 1e-10, DomainError when sqrt(t*) is not a recorded zero.
PoleSpecialization specialize_at_pole(const IsoFamily& fam, double t_star);

}  // namespace josephson
