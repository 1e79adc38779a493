#include "josephson/lax.hpp"

#include <cmath>

namespace josephson {
namespace {

const Eigen::Matrix2cd kD = (Eigen::Matrix2cd() << -0.5, 0.0, 0.0, 0.0).finished();

Tolerances b2_tolerances() {
  Tolerances t;
  t.abs_tol = 1e-14;
  t.rel_tol = 1e-13;
  return t;
}

FamilyCoeffs assemble(double b, double q, double h, double b2, double y) {
  FamilyCoeffs c;
  c.h = h;
  c.b2 = b2;
  c.g3_over_g1 = q;
  c.y = y;
  c.b3 = b2 * q / h + q * (-b + b2 * q);
  c.A << 0.5 * (1.0 + q * h), -0.5 * h, 0.5 * q * (1.0 + q * h), -0.5 * q * h;
  c.B << -b, b2, c.b3, 0.0;
  return c;
}

Eigen::Matrix2cd Mz(const FamilyCoeffs& c, double t, cplx z) { return -(t / (z * z)) * c.A + c.B / z + kD; }
Eigen::Matrix2cd Mt(const FamilyCoeffs& c, cplx z) { return c.A / z; }

}  // namespace

void IsoFamilyParams::validate() const {
  combo.validate();
  if (!std::isfinite(b) || combo.order_b != b) throw DomainError("combination order must equal b");
  if (b2_0 == 0.0 || !std::isfinite(b2_0)) throw DomainError("b2_0 must be finite and nonzero");
  if (C1_tilde == 0.0 || !std::isfinite(C1_tilde)) throw DomainError("C1_tilde must be finite and nonzero");
  if (!(t_ref > 0.0) || !(t_max > t_ref)) throw DomainError("need 0 < t_ref < t_max");
}

IsoFamily::IsoFamily(const IsoFamilyParams& params)
    : params_(params), sol_((params.validate(), params.combo), std::sqrt(params.t_max)) {
  const double s = std::sqrt(params_.t_ref);
  if (sol_.distance_to_singular(s) < 1e-6) throw DomainError("t_ref is a pole or zero of y");
  h_ref_ = 2.0 * params_.b2_0 / y(params_.t_ref);
}

double IsoFamily::y(double t) const { return y_of_t(sol_, t); }

std::pair<double, double> IsoFamily::b2_h(double t) const {
  if (!(t > 0.0) || t > params_.t_max) throw DomainError("t outside the family's working range");
  if (params_.freeze_b2) return {params_.b2_0, 2.0 * params_.b2_0 / y(t)};
  const double b = params_.b;
  auto field = [b](double tt, const Eigen::Vector2d& v) {
    Eigen::Vector2d d;
    d << -0.25 * v(1), (v(0) - b * v(1)) / tt;
    return d;
  };
  const auto res = dopri45<Eigen::Vector2d>(field, params_.t_ref, Eigen::Vector2d(params_.b2_0, h_ref_), t,
                                            b2_tolerances());
  return {res.y(0), res.y(1)};
}

FamilyCoeffs family_at(const IsoFamily& fam, double t) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  const double s = std::sqrt(t);
  const double yv = s * fam.solution().w(s);  // throws at poles
  const double q = fam.params().C1_tilde * u_eval(fam.params().combo, s).u;
  const auto [b2, h] = fam.b2_h(t);
  return assemble(fam.params().b, q, h, b2, yv);
}

MatrixField z_equation(const IsoFamily& fam, double t) {
  const FamilyCoeffs c = family_at(fam, t);
  return [c, t](cplx z) -> Eigen::Matrix2cd {
    if (z == cplx(0.0, 0.0)) throw DomainError("singular point");
    return Mz(c, t, z);
  };
}

MatrixField t_equation(const IsoFamily& fam, double t) {
  const FamilyCoeffs c = family_at(fam, t);
  return [c](cplx z) -> Eigen::Matrix2cd {
    if (z == cplx(0.0, 0.0)) throw DomainError("singular point");
    return Mt(c, z);
  };
}

CurvatureReport zero_curvature_residual(const LaxCoeffFn& coeffs, std::span<const cplx> z_samples,
                                        std::span<const double> t_samples) {
  CurvatureReport rep;
  for (double t : t_samples) {
    if (!(t > 0.0)) throw DomainError("t samples must be positive");
    const double dt = 1e-5 * t;
    FamilyCoeffs c0, cp, cm;
    try {
      c0 = coeffs(t);
      cp = coeffs(t + dt);
      cm = coeffs(t - dt);
    } catch (const DomainError&) {
      rep.excluded_t.push_back(t);
      continue;
    }
    for (const cplx& z : z_samples) {
      if (std::abs(z) < 1e-8) throw DomainError("z samples must avoid 0");
      const cplx dz = 1e-5 * std::abs(z);
      const Eigen::Matrix2cd dMz_dt = (Mz(cp, t + dt, z) - Mz(cm, t - dt, z)) / (2.0 * dt);
      const Eigen::Matrix2cd dMt_dz = (Mt(c0, z + dz) - Mt(c0, z - dz)) / (2.0 * dz);
      const Eigen::Matrix2cd mz = Mz(c0, t, z), mt = Mt(c0, z);
      const Eigen::Matrix2cd R = dMz_dt - dMt_dz + (mz * mt - mt * mz);
      rep.max_residual = std::max(rep.max_residual, R.cwiseAbs().maxCoeff());
    }
  }
  return rep;
}

CurvatureReport zero_curvature_residual(const IsoFamily& fam, std::span<const cplx> z_samples,
                                        std::span<const double> t_samples) {
  return zero_curvature_residual([&fam](double t) { return family_at(fam, t); }, z_samples, t_samples);
}

double isomonodromy_drift(const IsoFamily& fam, std::span<const double> t_list, double radius,
                          const Tolerances& tol) {
  if (t_list.empty()) throw DomainError("t_list is empty");
  if (!(radius > 0.0)) throw DomainError("radius must be positive");
  cplx first{};
  double drift = 0.0;
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    const double t = t_list[i];
    const ComplexPath loop = ComplexPath::circle(cplx(0.0, 0.0), std::sqrt(t) * radius);
    const Eigen::Matrix2cd M = integrate_matrix_along_path(z_equation(fam, t), Eigen::Matrix2cd::Identity(),
                                                           loop, tol);
    const cplx tr = M.trace();
    if (i == 0) {
      first = tr;
    } else {
      drift = std::max(drift, std::abs(tr - first));
    }
  }
  return drift;
}

PoleSpecialization specialize_at_pole(const IsoFamily& fam, double t_star) {
  if (!(t_star > 0.0)) throw DomainError("t_star must be positive");
  const double s = std::sqrt(t_star);
  const auto& poles = fam.solution().poles();
  double ps = -1.0;
  for (double p : poles)
    if (std::abs(p - s) <= 1e-6) ps = p;
  if (ps < 0.0) throw DomainError("sqrt(t_star) is not a recorded zero of u");
  const UValue v = u_eval(fam.params().combo, ps);
  if (std::abs(v.du) < 1e-10) throw DomainError("double zero, specialization invalid");

  PoleSpecialization out;
  out.t_star = ps * ps;
  out.b2_star = fam.b2_h(out.t_star).first;
  out.b3_star = fam.params().C1_tilde * ps * v.du / 2.0;
  const double b = fam.params().b, t = out.t_star, b2 = out.b2_star, b3 = out.b3_star;
  out.system = [=](cplx z) -> Eigen::Matrix2cd {
    if (z == cplx(0.0, 0.0)) throw DomainError("singular point");
    Eigen::Matrix2cd C;
    C << -t / (2.0 * z * z) - b / z - 0.5, b2 / z, b3 / z, 0.0;
    return C;
  };
  out.system_zeta = [=](cplx zeta) -> Eigen::Matrix2cd {
    if (zeta == cplx(0.0, 0.0)) throw DomainError("singular point");
    Eigen::Matrix2cd C;
    C << -ps / (2.0 * zeta * zeta) - b / zeta - ps / 2.0, b2 / zeta, b3 / zeta, 0.0;
    return C;
  };
  return out;
}

}  // namespace josephson
