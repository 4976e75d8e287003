#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pbl/geometry.hpp"
#include "pbl/lattice.hpp"

namespace pbl {

/// C(k) = c_gamma k^exponent.
struct ConstantModel {
  double c_gamma = 1.0;
  int exponent = 2;

  /// Throws std::invalid_argument unless c_gamma > 0.
  LogReal at(int k) const;
};

struct BoundReport {
  int n = 2;
  int k = 0;
  double r_X = 0.0;
  /// In the order identity_term, middle_term, ring_term[, cusp_term].
  std::vector<std::pair<std::string, LogReal>> terms;
  LogReal total;
  LogReal normalized_total;  // total / C(k)

  /// Theorem-3 reports only: C(k) times the certified lattice sum, and whether
  /// cusp_term >= C(k) * lattice sum * covolume.
  std::optional<LogReal> lattice_alternative;
  std::optional<bool> cusp_dominates_lattice;

  const LogReal& term(const std::string& name) const;
};

/// identity C, middle C cosh^{2n}(r/4) / ((k-2n-1) sinh^{2n}(r/4)),
/// ring C sinh^{2n}(5r/8) / (sinh^{2n}(r/4) cosh^k(3r/8)).
/// Throws std::invalid_argument unless n >= 2, k >= 2n+2, r_X > 0.
BoundReport cocompact_bound(int n, int k, double r_X, const ConstantModel& cm = {});

struct LatticeSumResult {
  LogReal value;
  double R_alpha = 0.0;
  double R_beta = 0.0;
  double tail_bound = 0.0;  // certified bound on the omitted part of the sum
  long long terms = 0;
};

/// sum over L of (k/2pi)^k / |k/2pi + |alpha|^2/2 + i beta|^k, truncated to the
/// box |alpha| <= R_alpha, |beta| <= R_beta with the omitted part certified
/// below rel_tol times the partial sum. Rows of the alpha box are split over
/// `jobs` threads (0: hardware concurrency); the result does not depend on it.
/// Throws std::invalid_argument unless k >= 6 and 0 < rel_tol <= 1e-3.
LatticeSumResult cusp_lattice_sum(int k, const LatticeSpec& spec, double rel_tol, int jobs = 0);

/// (k/2pi)^k times the integral of |k/2pi + |alpha|^2/2 + i beta|^{-k} over
/// C x R with Lebesgue measure; the density-one comparison for the lattice sum.
LogReal cusp_integral_majorant(int k);

struct GammaChain {
  int k = 0;
  double beta_closed = 0.0;  // sqrt(pi) Gamma((k-1)/2) / Gamma(k/2)
  double beta_quad = 0.0;    // A^{k-1} * integral over R of (A^2 + b^2)^{-k/2} db
  LogReal r_closed;          // (2 pi)^{k-1} Gamma(k - 3/2) / (k^{k-3/2} Gamma(k-1))
  LogReal r_quad;            // integral over [0, inf) of (k/2pi + r^2/2)^{-(k-1)} dr
  LogReal chained;           // beta_closed * r_closed
  LogReal double_quad;       // nested quadrature of the (r, beta) double integral
  double beta_rel_error = 0.0;
  double r_ratio = 0.0;  // r_quad / r_closed
};

/// Throws std::invalid_argument for k < 6 and NumericalError if a quadrature fails.
GammaChain gamma_integral_chain(int k);

/// Gamma-function prefactor of the cusp term.
enum class CuspTerm {
  /// sqrt(pi) Gamma(k/2 - 1/2) Gamma(k - 3/2) / (Gamma(k/2) Gamma(k-1)), the
  /// product of the two integral closed forms.
  Chained,
  /// Same with Gamma(k/2 - 1) in place of Gamma(k/2 - 1/2).
  Printed,
};

struct Theorem3Options {
  CuspTerm cusp = CuspTerm::Chained;
  /// Attach the certified lattice sum; needs LatticeSpec and costs a few ms.
  bool with_lattice_sum = false;
  double lattice_rel_tol = 1e-8;
  int jobs = 0;
};

/// prefactor(k) * k^{3/2}, without C(k).
LogReal cusp_term_factor(int k, CuspTerm variant = CuspTerm::Chained);

/// The cocompact terms at n = 2 plus C(k) cusp_term_factor(k).
/// Throws std::invalid_argument unless k >= 6 and r_X > 0.
BoundReport theorem3_bound(int k, double r_X, const ConstantModel& cm = {},
                           const LatticeSpec& spec = LatticeSpec::gaussian(),
                           const Theorem3Options& opts = {});

struct MaximaResult {
  ModelPoint point;
  double log_value;
  int starts_converged;
};

/// Maximizes log P over (Re z1, Re z2, Im z2) with Im z1 = 0, by coordinate
/// ascent with golden-section line searches from five fixed starts, 200
/// sweeps each. Throws NumericalError if the best point misses
/// Re z1 = -k/4pi by more than tol * k/4pi or |z2| > tol.
MaximaResult maxima_locate(int k, double tol = 1e-6);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of log-residuals
};

/// Least squares of log bound(k) against log k. Throws std::invalid_argument
/// with fewer than 5 distinct k or a non-positive bound value.
ScalingFit scaling_fit(const std::vector<int>& ks, const std::function<LogReal(int)>& bound);
ScalingFit scaling_fit(const std::vector<int>& ks, const std::vector<LogReal>& values);

}  // namespace pbl
