#pragma once

// Adjacency points (integer b, a != 0, trivial monodromy at zeta = 0) and the
// chains generated from one of them by the zeros of
//   u(s) = s^b (J_b(s) + y0 Y_b(s)),   y0 = -J_b(a0) / Y_b(a0).

#include <vector>

#include "josephson/monodromy.hpp"
#include "josephson/specfun.hpp"

namespace josephson {

struct AdjacencySeed {
  double b = 0.0;
  double a0 = 0.0;
  double omega0 = 1.0;
  double residual = 0.0;  // identity residual of the monodromy at the seed

  void validate() const;
};

struct ChainPoint {
  int k = 0;                  // index of the zero of u, counting from 1
  double a_star = 0.0;
  double omega_star = 0.0;
  double verify_residual = 0.0;
};

/// y0 = -J_b(a0)/Y_b(a0). Throws DomainError("Y vanishes at seed; use
/// pure-Y combination") when |Y_b(a0)| < 1e-14.
double seed_y0(double b, double a0);

/// Combination vanishing at a0; the pure second-kind form when Y_b(a0) = 0.
BesselCombo seed_combo(double b, double a0);

enum class ChainFormula {
  /// omega_k = omega0 a0 u'(a0) / (a_k u'(a_k)), u' including the s^b prefactor.
  ZeroRatio,
  /// omega_k from b2 b3 = -1/(4 omega^2) at the specialized Lax family:
  /// omega_k = omega0 a0^(1-b) u'(a0) / (a_k^(1-b) u'(a_k)). Diagnostic only.
  LaxProduct,
};

struct ChainOptions {
  ChainFormula formula = ChainFormula::ZeroRatio;
  bool verify = true;  // fill verify_residual (one monodromy loop per point)
  Tolerances tol = monodromy_tolerances();
};

/// First k_max zeros of u and their omega values (absolute value of the
/// formula). The zero equal to a0 reproduces omega0. Zeros where
/// |u'| < 1e-12 max(1, |u'(a0)|) are skipped. Points are verified in parallel.
std::vector<ChainPoint> chain(const AdjacencySeed& seed, int k_max, const ChainOptions& opts = {});

/// omega = 1 / (2 sqrt(-b2 b3)); DomainError("no real omega*") if b2 b3 >= 0.
double omega_from_b2b3(double b2, double b3);

/// d = (b3/b2)^(1/4); DomainError("no real symmetric gauge") if b2 = 0 or b3/b2 <= 0.
double symmetric_gauge(double b2, double b3);

/// Identity residual of the monodromy at (b, a, omega). DomainError for a = 0.
double verify_point(double b, double a, double omega, const Tolerances& tol = monodromy_tolerances());

/// verify_point below kTrivialityThreshold and b an integer.
bool is_certified_adjacency(double b, double a, double omega, const Tolerances& tol = monodromy_tolerances());

struct SeedSearch {
  double step = 0.05;
  double candidate_threshold = 0.5;
  double certify = kTrivialityThreshold;
  double polish = kTrivialityPolish;
  Tolerances tol = monodromy_tolerances();
};

/// All certified adjacency points on b in (a_lo, a_hi): identity residual on
/// a grid of the given step, every local minimum below candidate_threshold
/// refined by golden section, kept if it reaches `certify`, then polished
/// toward `polish`. Sorted by a.
std::vector<AdjacencySeed> find_all_seeds(double b, double omega, double a_lo, double a_hi,
                                          const SeedSearch& search = {});

/// Smallest-a certified seed; NotFoundError("no adjacency in range") if none.
/// Requires integer b >= 0 and 0 <= a_lo < a_hi.
AdjacencySeed find_seed(double b, double omega, double a_lo, double a_hi, const SeedSearch& search = {});

struct OmegaFit {
  double omega = 0.0;
  double residual = 0.0;
};

/// Omega in [omega_lo, omega_hi] minimizing the identity residual at (b, a):
/// a 1% geometric scan followed by golden-section refinement. Used to test
/// whether a chain abscissa is an adjacency point for some omega.
OmegaFit best_omega(double b, double a, double omega_lo, double omega_hi,
                    const Tolerances& tol = monodromy_tolerances());

struct BoundaryChainPoint {
  ChainPoint point;
  cplx trace{};
  cplx det{};
  cplx discriminant{};
};

struct BoundaryChain {
  cplx seed_trace{};
  cplx seed_det{};
  cplx seed_discriminant{};
  std::vector<BoundaryChainPoint> points;
};

/// chain() without the integrality requirement on b; records the monodromy
/// invariants at the seed and at every point.
BoundaryChain boundary_chain(double b, double a0, double omega0, int k_max, const ChainOptions& opts = {});

}  // namespace josephson
