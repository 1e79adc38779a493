#include "josephson/odeint.hpp"

#include <numbers>

namespace josephson {

void Tolerances::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("tolerances must be positive");
  if (max_steps < 1) throw DomainError("max_steps must be at least 1");
}

Tolerances Tolerances::scaled(double factor) const {
  Tolerances t = *this;
  t.abs_tol *= factor;
  t.rel_tol *= factor;
  return t;
}

Integration<Eigen::VectorXd> integrate_real(const RealField& field, const Eigen::VectorXd& y0, double t0,
                                            double t1, const Tolerances& tol) {
  if (!std::isfinite(t0) || !std::isfinite(t1)) throw DomainError("integration span must be finite");
  return dopri45<Eigen::VectorXd>(field, t0, y0, t1, tol);
}

// ---------------------------------------------------------------------------

ComplexPath ComplexPath::circle(cplx center, double radius, int turns, double start_angle) {
  if (!(radius > 0.0)) throw DomainError("circle radius must be positive");
  if (turns == 0) throw DomainError("circle needs a nonzero number of turns");
  ComplexPath p = arc(center, radius, start_angle, start_angle + 2.0 * std::numbers::pi * turns);
  p.tag_ = "circle";
  return p;
}

ComplexPath ComplexPath::arc(cplx center, double radius, double theta0, double theta1) {
  if (!(radius > 0.0)) throw DomainError("arc radius must be positive");
  ComplexPath p;
  p.kind_ = Kind::Arc;
  p.center_ = center;
  p.radius_ = radius;
  p.theta0_ = theta0;
  p.theta1_ = theta1;
  p.tag_ = "arc";
  return p;
}

ComplexPath ComplexPath::segment(cplx from, cplx to) {
  ComplexPath p;
  p.kind_ = Kind::Segment;
  p.from_ = from;
  p.to_ = to;
  p.tag_ = "segment";
  return p;
}

cplx ComplexPath::point(double s) const {
  if (kind_ == Kind::Segment) return from_ + s * (to_ - from_);
  const double th = theta0_ + s * (theta1_ - theta0_);
  return center_ + std::polar(radius_, th);
}

cplx ComplexPath::tangent(double s) const {
  if (kind_ == Kind::Segment) return to_ - from_;
  const double th = theta0_ + s * (theta1_ - theta0_);
  return cplx(0.0, theta1_ - theta0_) * std::polar(radius_, th);
}

ComplexPath ComplexPath::reversed() const {
  ComplexPath p = *this;
  if (kind_ == Kind::Segment) {
    std::swap(p.from_, p.to_);
  } else {
    std::swap(p.theta0_, p.theta1_);
  }
  return p;
}

double ComplexPath::distance_to(cplx q) const {
  if (kind_ == Kind::Segment) {
    const cplx d = to_ - from_;
    const double len2 = std::norm(d);
    double s = len2 > 0.0 ? std::real((q - from_) * std::conj(d)) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return std::abs(point(s) - q);
  }
  const double sweep = theta1_ - theta0_;
  if (std::abs(sweep) >= 2.0 * std::numbers::pi) return std::abs(std::abs(q - center_) - radius_);
  // Partial arc: nearest point is either the radial projection (if it lies
  // on the arc) or one of the endpoints.
  double best = std::min(std::abs(point(0.0) - q), std::abs(point(1.0) - q));
  if (q != center_) {
    const double phi = std::arg(q - center_);
    const double lo = std::min(theta0_, theta1_);
    const double hi = std::max(theta0_, theta1_);
    for (int k = -2; k <= 2; ++k) {
      const double cand = phi + 2.0 * std::numbers::pi * k;
      if (cand >= lo && cand <= hi) best = std::min(best, std::abs(std::abs(q - center_) - radius_));
    }
  } else {
    best = radius_;
  }
  return best;
}

bool ComplexPath::closed() const {
  return std::abs(point(0.0) - point(1.0)) <= 1e-14 * std::max(1.0, std::abs(point(0.0)));
}

// ---------------------------------------------------------------------------

Transport transport_along_path(const MatrixField& coeff, const Eigen::Matrix2cd& Y0, const ComplexPath& path,
                               const Tolerances& tol, std::span<const cplx> singular_points) {
  for (const cplx& p : singular_points) {
    if (path.distance_to(p) <= 1e-12 * std::max(1.0, std::abs(p))) throw DomainError("singular path");
  }
  Transport out;
  out.matrix = Y0;

  auto field = [&](double s, const Eigen::Matrix2cd& Y) -> Eigen::Matrix2cd {
    const cplx z = path.point(s);
    const Eigen::Matrix2cd C = coeff(z);
    if (!C.allFinite()) throw NumericalError("singular path");
    return (C * path.tangent(s)) * Y;
  };
  auto renormalize = [&](double, Eigen::Matrix2cd& Y) {
    const double m = Y.cwiseAbs().maxCoeff();
    if (m > 1e100) {
      Y /= m;
      out.log_scale += std::log(m);
    }
    return true;
  };
  auto res = dopri45<Eigen::Matrix2cd>(field, 0.0, Y0, 1.0, tol, renormalize);
  out.matrix = res.y;
  out.stats = res.stats;
  return out;
}

Eigen::Matrix2cd integrate_matrix_along_path(const MatrixField& coeff, const Eigen::Matrix2cd& Y0,
                                             const ComplexPath& path, const Tolerances& tol) {
  const cplx origin[] = {cplx(0.0, 0.0)};
  return transport_along_path(coeff, Y0, path, tol, origin).value();
}

}  // namespace josephson
