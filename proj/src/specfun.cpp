#include "josephson/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "josephson/errors.hpp"

namespace josephson {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIter = 100000;

// Taylor coefficients of 1/Gamma(1+x) about 0.
constexpr std::array<double, 23> kRecipGamma = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
};

// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2,
// gampl = 1/G(1+mu), gammi = 1/G(1-mu), for |mu| <= 1/2.
struct GammaTerms {
  double gam1, gam2, gampl, gammi;
};

GammaTerms temme_gamma(double mu) {
  const double mu2 = mu * mu;
  double odd = 0.0, even = 0.0, p = 1.0;
  for (std::size_t k = 0; k + 1 < kRecipGamma.size(); k += 2) {
    even += kRecipGamma[k] * p;
    odd += kRecipGamma[k + 1] * p;
    p *= mu2;
  }
  GammaTerms g;
  g.gam1 = -odd;
  g.gam2 = even;
  g.gampl = even + mu * odd;
  g.gammi = even - mu * odd;
  return g;
}

// Non-negative order. Follows the classical CF1/CF2 (Steed) + Temme scheme.
BesselValues bessel_nonneg(double nu, double x) {
  const int nl = x < 2.0 ? static_cast<int>(nu + 0.5) : std::max(0, static_cast<int>(nu - x + 1.5));
  const double mu = nu - nl;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / kPi;  // Wronskian 2/(pi x)

  // CF1: J'_nu / J_nu, with the sign of J_nu tracked through isign.
  int isign = 1;
  double h = std::max(nu * xi, kFpMin);
  double b = xi2 * nu, d = 0.0, c = h;
  int i = 0;
  for (; i < kMaxIter; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b - 1.0 / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) <= kEps) break;
  }
  if (i >= kMaxIter) throw NumericalError("Bessel CF1 did not converge");

  // Downward recurrence from nu to mu, unnormalized.
  double rjl = isign * kFpMin;
  double rjpl = h * rjl;
  const double rjl1 = rjl;
  const double rjp1 = rjpl;
  double fact = nu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double rjmu, rymu, rymup, ry1;
  if (x < 2.0) {
    // Temme's series for Y_mu, Y_{mu+1}.
    const double x2 = 0.5 * x;
    const double pimu = kPi * mu;
    const double fact1 = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    const double dd = -std::log(x2);
    const double e = mu * dd;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const GammaTerms g = temme_gamma(mu);
    double ff = 2.0 / kPi * fact1 * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * dd);
    const double ee = std::exp(e);
    double p = ee / (g.gampl * kPi);
    double q = 1.0 / (ee * kPi * g.gammi);
    const double pimu2 = 0.5 * pimu;
    const double fact3 = std::abs(pimu2) < kEps ? 1.0 : std::sin(pimu2) / pimu2;
    const double r = kPi * pimu2 * fact3 * fact3;
    double cc = 1.0;
    const double dneg = -x2 * x2;
    double sum = ff + r * q;
    double sum1 = p;
    int k = 1;
    for (; k <= kMaxIter; ++k) {
      ff = (k * ff + p + q) / (k * k - mu2);
      cc *= dneg / k;
      p /= (k - mu);
      q /= (k + mu);
      const double del = cc * (ff + r * q);
      sum += del;
      const double del1 = cc * p - k * del;
      sum1 += del1;
      if (std::abs(del) < (1.0 + std::abs(sum)) * kEps) break;
    }
    if (k > kMaxIter) throw NumericalError("Bessel Temme series did not converge");
    rymu = -sum;
    ry1 = -sum1 * xi2;
    rymup = mu * xi * rymu - ry1;
    rjmu = w / (rymup - f * rymu);
  } else {
    // CF2 (Steed): p + iq = (J'_mu + i Y'_mu) / (J_mu + i Y_mu).
    double a = 0.25 - mu2;
    double p = -0.5 * xi;
    double q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    double fct = a * xi / (p * p + q * q);
    double cr = br + q * fct;
    double ci = bi + p * fct;
    double den = br * br + bi * bi;
    double dr = br / den;
    double di = -bi / den;
    double dlr = cr * dr - ci * di;
    double dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    int k = 1;
    for (; k < kMaxIter; ++k) {
      a += 2 * k;
      bi += 2.0;
      dr = a * dr + br;
      di = a * di + bi;
      if (std::abs(dr) + std::abs(di) < kFpMin) dr = kFpMin;
      fct = a / (cr * cr + ci * ci);
      cr = br + cr * fct;
      ci = bi - ci * fct;
      if (std::abs(cr) + std::abs(ci) < kFpMin) cr = kFpMin;
      den = dr * dr + di * di;
      dr /= den;
      di /= -den;
      dlr = cr * dr - ci * di;
      dli = cr * di + ci * dr;
      temp = p * dlr - q * dli;
      q = p * dli + q * dlr;
      p = temp;
      if (std::abs(dlr - 1.0) + std::abs(dli) <= kEps) break;
    }
    if (k >= kMaxIter) throw NumericalError("Bessel CF2 did not converge");
    const double gam = (p - f) / q;
    rjmu = std::sqrt(w / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);
    rymu = rjmu * gam;
    rymup = rymu * (p + q / gam);
    ry1 = mu * xi * rymu - rymup;
  }

  const double scale = rjmu / rjl;
  BesselValues out;
  out.J = rjl1 * scale;
  out.dJ = rjp1 * scale;
  for (int k = 1; k <= nl; ++k) {
    const double rytemp = (mu + k) * xi2 * ry1 - rymu;
    rymu = ry1;
    ry1 = rytemp;
  }
  out.Y = rymu;
  out.dY = nu * xi * rymu - ry1;
  return out;
}

}  // namespace

BesselValues bessel_pair(double nu, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("domain error");
  if (!std::isfinite(nu) || std::abs(nu) > kMaxBesselOrder) throw DomainError("unsupported order");
  if (nu >= 0.0) return bessel_nonneg(nu, s);

  const double m = -nu;
  const BesselValues p = bessel_nonneg(m, s);
  if (m == std::floor(m)) {
    const double sg = std::fmod(m, 2.0) == 0.0 ? 1.0 : -1.0;
    return {sg * p.J, sg * p.Y, sg * p.dJ, sg * p.dY};
  }
  // J_{-m} = cos(m pi) J_m - sin(m pi) Y_m,  Y_{-m} = sin(m pi) J_m + cos(m pi) Y_m.
  const double frac = m - std::floor(m);
  double c = std::cos(kPi * m), sn = std::sin(kPi * m);
  if (frac == 0.5) c = 0.0;
  return {c * p.J - sn * p.Y, sn * p.J + c * p.Y, c * p.dJ - sn * p.dY, sn * p.dJ + c * p.dY};
}

void BesselCombo::validate() const {
  if (!std::isfinite(order_b)) throw DomainError("Bessel combination order must be finite");
  if (!std::isfinite(y0)) throw DomainError("Bessel combination mixing constant must be finite");
  if (std::abs(order_b) > kMaxBesselOrder) throw DomainError("unsupported order");
}

UValue u_eval(const BesselCombo& combo, double s) {
  const BesselValues bv = bessel_pair(combo.order_b, s);
  UValue out;
  if (combo.pure_second_kind) {
    out.z = bv.Y;
    out.dz = bv.dY;
  } else {
    out.z = bv.J + combo.y0 * bv.Y;
    out.dz = bv.dJ + combo.y0 * bv.dY;
  }
  const double b = combo.order_b;
  const double pref = std::pow(s, b);
  out.u = pref * out.z;
  out.du = pref * (b / s * out.z + out.dz);
  return out;
}

namespace {

// f(s) -> (value, derivative). Shared sweep for zeros of u and of u'.
template <class Eval>
ZeroList sweep_zeros(Eval&& eval, double s_min, double s_max, int max_count, double floor_scale) {
  if (!(s_min > 0.0) || !(s_max > s_min)) throw DomainError("zero search needs 0 < s_min < s_max");
  if (max_count < 0) throw DomainError("max_count must be non-negative");
  ZeroList out;
  if (max_count == 0) return out;

  const double step = kPi / 8.0;
  const int n = std::max(1, static_cast<int>(std::ceil((s_max - s_min) / step)));
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int k = 0; k <= n; ++k) {
    xs[k] = k == n ? s_max : s_min + k * step;
    fs[k] = eval(xs[k]).first;
  }

  // |f| < 1e-11, or at the rounding floor of the evaluation when the s^b
  // prefactor makes 1e-11 unreachable.
  auto tolerance_met = [&](double, double v) { return std::abs(v) < std::max(1e-11, 64.0 * kEps * floor_scale); };
  auto push = [&](double s, double v, bool ok) {
    if (!out.zeros.empty() && std::abs(s - out.zeros.back()) < 1e-12 * s) return;
    out.zeros.push_back(s);
    out.residuals.push_back(std::abs(v));
    out.refined.push_back(ok);
  };

  for (int k = 0; k < n && static_cast<int>(out.zeros.size()) < max_count; ++k) {
    double lo = xs[k], hi = xs[k + 1], flo = fs[k], fhi = fs[k + 1];
    if (flo == 0.0) {
      push(lo, 0.0, true);
      continue;
    }
    if (flo * fhi < 0.0) {
      for (int it = 0; it < 200 && hi - lo > 4.0 * kEps * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval(mid).first;
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double s = 0.5 * (lo + hi);
      auto [v, dv] = eval(s);
      if (dv != 0.0) {
        const double polished = s - v / dv;
        if (polished >= xs[k] && polished <= xs[k + 1]) {
          const double vp = eval(polished).first;
          if (std::abs(vp) <= std::abs(v)) {
            s = polished;
            v = vp;
          }
        }
      }
      push(s, v, tolerance_met(s, v));
      continue;
    }
    // No sign change: look for a tangential dip at an interior sample.
    if (k > 0 && std::abs(fs[k]) < std::abs(fs[k - 1]) && std::abs(fs[k]) < std::abs(fs[k + 1]) &&
        fs[k - 1] * fs[k] > 0.0 && fs[k] * fs[k + 1] > 0.0) {
      double a = xs[k - 1], c = xs[k + 1];
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
      double f1 = std::abs(eval(x1).first), f2 = std::abs(eval(x2).first);
      for (int it = 0; it < 100 && c - a > 1e-12 * c; ++it) {
        if (f1 < f2) {
          c = x2;
          x2 = x1;
          f2 = f1;
          x1 = c - gr * (c - a);
          f1 = std::abs(eval(x1).first);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + gr * (c - a);
          f2 = std::abs(eval(x2).first);
        }
      }
      const double s = 0.5 * (a + c);
      const double v = eval(s).first;
      if (std::abs(v) < 1e-8 * std::max(1.0, floor_scale)) push(s, v, false);
    }
  }
  return out;
}

}  // namespace

ZeroList find_zeros(const BesselCombo& combo, double s_min, double s_max, int max_count) {
  combo.validate();
  auto eval = [&](double s) {
    const UValue v = u_eval(combo, s);
    return std::pair<double, double>(v.u, v.du);
  };
  const double scale = std::pow(s_max, combo.order_b) * (1.0 + std::abs(combo.y0));
  return sweep_zeros(eval, s_min, s_max, max_count, scale);
}

ZeroList find_critical_points(const BesselCombo& combo, double s_min, double s_max, int max_count) {
  combo.validate();
  const double b = combo.order_b;
  auto eval = [&](double s) {
    const UValue v = u_eval(combo, s);
    const double d2u = -((1.0 - 2.0 * b) / s) * v.du - v.u;
    return std::pair<double, double>(v.du, d2u);
  };
  const double scale = std::pow(s_max, combo.order_b) * (1.0 + std::abs(combo.y0));
  return sweep_zeros(eval, s_min, s_max, max_count, scale);
}

}  // namespace josephson
