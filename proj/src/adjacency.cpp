#include "josephson/adjacency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace josephson {
namespace {

bool is_integer(double b) { return std::abs(b - std::round(b)) < 1e-12; }

// Golden-section minimum of f on [lo, hi]; stops once the bracket is below
// x_tol or the best value is below f_target.
template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double x_tol, double f_target) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > x_tol && std::min(f1, f2) > f_target) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

double formula_weight(ChainFormula formula, double b, double s, double du) {
  switch (formula) {
    case ChainFormula::ZeroRatio:
      return s * du;
    case ChainFormula::LaxProduct:
      return std::pow(s, 1.0 - b) * du;
  }
  return s * du;
}

}  // namespace

void AdjacencySeed::validate() const {
  if (!std::isfinite(b)) throw DomainError("seed b must be finite");
  if (!(a0 > 0.0) || !std::isfinite(a0)) throw DomainError("seed a0 must be positive");
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("seed omega0 must be positive");
}

double seed_y0(double b, double a0) {
  if (!(a0 > 0.0)) throw DomainError("a0 must be positive");
  const BesselValues v = bessel_pair(b, a0);
  if (std::abs(v.Y) < 1e-14) throw DomainError("Y vanishes at seed; use pure-Y combination");
  return -v.J / v.Y;
}

BesselCombo seed_combo(double b, double a0) {
  BesselCombo c;
  c.order_b = b;
  try {
    c.y0 = seed_y0(b, a0);
  } catch (const DomainError& e) {
    if (std::string(e.what()).rfind("Y vanishes", 0) != 0) throw;
    c.pure_second_kind = true;
  }
  return c;
}

std::vector<ChainPoint> chain(const AdjacencySeed& seed, int k_max, const ChainOptions& opts) {
  seed.validate();
  if (k_max < 0) throw DomainError("k_max must be non-negative");
  std::vector<ChainPoint> out;
  if (k_max == 0) return out;

  const BesselCombo combo = seed_combo(seed.b, seed.a0);
  const UValue at_seed = u_eval(combo, seed.a0);
  const double w0 = formula_weight(opts.formula, seed.b, seed.a0, at_seed.du);
  if (std::abs(at_seed.du) < 1e-300) throw DomainError("u' vanishes at the seed");

  // Widen the search window until k_max zeros are found.
  double s_max = seed.a0 + std::numbers::pi * (k_max + 2);
  ZeroList zl;
  for (int attempt = 0; attempt < 8; ++attempt) {
    zl = find_zeros(combo, 1e-3, s_max, k_max);
    if (static_cast<int>(zl.zeros.size()) >= k_max) break;
    s_max *= 2.0;
  }

  const double du_floor = 1e-12 * std::max(1.0, std::abs(at_seed.du));
  for (std::size_t i = 0; i < zl.zeros.size(); ++i) {
    double s = zl.zeros[i];
    if (std::abs(s - seed.a0) < 1e-9 * seed.a0) s = seed.a0;
    const UValue v = u_eval(combo, s);
    if (std::abs(v.du) < du_floor) continue;
    ChainPoint p;
    p.k = static_cast<int>(i) + 1;
    p.a_star = s;
    p.omega_star = s == seed.a0 ? seed.omega0
                                : std::abs(seed.omega0 * w0 / formula_weight(opts.formula, seed.b, s, v.du));
    out.push_back(p);
  }

  if (opts.verify) {
    const long n = static_cast<long>(out.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      try {
        out[i].verify_residual = verify_point(seed.b, out[i].a_star, out[i].omega_star, opts.tol);
      } catch (const std::exception&) {
        out[i].verify_residual = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return out;
}

double omega_from_b2b3(double b2, double b3) {
  const double p = b2 * b3;
  if (!(p < 0.0)) throw DomainError("no real omega*");
  return 1.0 / (2.0 * std::sqrt(-p));
}

double symmetric_gauge(double b2, double b3) {
  if (b2 == 0.0 || !(b3 / b2 > 0.0)) throw DomainError("no real symmetric gauge");
  return std::pow(b3 / b2, 0.25);
}

double verify_point(double b, double a, double omega, const Tolerances& tol) {
  if (a == 0.0) throw DomainError("a must be nonzero");
  return triviality_residual({b, a, omega}, tol);
}

bool is_certified_adjacency(double b, double a, double omega, const Tolerances& tol) {
  return is_integer(b) && verify_point(b, a, omega, tol) < kTrivialityThreshold;
}

std::vector<AdjacencySeed> find_all_seeds(double b, double omega, double a_lo, double a_hi,
                                          const SeedSearch& search) {
  if (!is_integer(b) || b < 0.0) throw DomainError("seed search needs an integer b >= 0");
  if (!(a_lo >= 0.0) || !(a_hi > a_lo)) throw DomainError("a range must satisfy 0 <= lo < hi");
  if (!(omega >= kMinOmega)) throw DomainError("omega must be at least 1e-3");
  if (!(search.step > 0.0)) throw DomainError("scan step must be positive");

  std::vector<JosephsonParams> grid;
  for (double a = a_lo + search.step; a < a_hi; a += search.step) grid.push_back({b, a, omega});
  if (grid.size() < 3) return {};
  const std::vector<MonodromyResult> scan = monodromy_sweep(grid, kDefaultLoopRadius, search.tol);

  auto residual = [&](double a) { return triviality_residual({b, a, omega}, search.tol); };
  std::vector<AdjacencySeed> seeds;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double r = scan[i].identity_residual;
    if (!(r < scan[i - 1].identity_residual && r <= scan[i + 1].identity_residual)) continue;
    if (!(r < search.candidate_threshold)) continue;
    auto [a, val] = golden_min(residual, grid[i - 1].a, grid[i + 1].a, 1e-12, search.certify);
    if (!(val < search.certify)) continue;
    // Polish: shrink the bracket around the certified point toward `polish`.
    const double w = std::max(1e-3, 4.0 * search.step * val);
    auto [ap, vp] = golden_min(residual, a - w, a + w, 1e-13, search.polish);
    if (vp < val) {
      a = ap;
      val = vp;
    }
    seeds.push_back({b, a, omega, val});
  }
  return seeds;
}

AdjacencySeed find_seed(double b, double omega, double a_lo, double a_hi, const SeedSearch& search) {
  const auto seeds = find_all_seeds(b, omega, a_lo, a_hi, search);
  if (seeds.empty()) throw NotFoundError("no adjacency in range");
  return seeds.front();
}

OmegaFit best_omega(double b, double a, double omega_lo, double omega_hi, const Tolerances& tol) {
  if (!(omega_lo >= kMinOmega) || !(omega_hi > omega_lo))
    throw DomainError("omega range must satisfy 1e-3 <= lo < hi");
  std::vector<JosephsonParams> grid;
  for (double w = omega_lo; w <= omega_hi; w *= 1.01) grid.push_back({b, a, w});
  const std::vector<MonodromyResult> scan = monodromy_sweep(grid, kDefaultLoopRadius, tol);
  std::size_t best = 0;
  for (std::size_t i = 1; i < scan.size(); ++i)
    if (scan[i].identity_residual < scan[best].identity_residual) best = i;
  const double lo = grid[best == 0 ? 0 : best - 1].omega;
  const double hi = grid[std::min(best + 1, grid.size() - 1)].omega;
  auto f = [&](double w) { return verify_point(b, a, w, tol); };
  const auto [w, r] = golden_min(f, lo, hi, 1e-12 * hi, 0.0);
  return {w, r};
}

BoundaryChain boundary_chain(double b, double a0, double omega0, int k_max, const ChainOptions& opts) {
  ChainOptions o = opts;
  o.verify = false;
  BoundaryChain out;
  const MonodromyResult at_seed = monodromy_loop({b, a0, omega0}, kDefaultLoopRadius, opts.tol);
  out.seed_trace = at_seed.matrix.trace();
  out.seed_det = at_seed.matrix.determinant();
  out.seed_discriminant = at_seed.eig_discriminant;
  for (const ChainPoint& p : chain({b, a0, omega0, 0.0}, k_max, o)) {
    BoundaryChainPoint bp;
    bp.point = p;
    const MonodromyResult m = monodromy_loop({b, p.a_star, p.omega_star}, kDefaultLoopRadius, opts.tol);
    bp.point.verify_residual = m.identity_residual;
    bp.trace = m.matrix.trace();
    bp.det = m.matrix.determinant();
    bp.discriminant = m.eig_discriminant;
    out.points.push_back(bp);
  }
  return out;
}

}  // namespace josephson
