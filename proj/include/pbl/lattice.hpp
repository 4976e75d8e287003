#pragma once

#include <functional>
#include <vector>

#include "pbl/transforms.hpp"

namespace pbl {

/// Coordinates (alpha, beta) of an element of the stabilizer of infinity.
struct HeisenbergParam {
  Complex alpha{0.0, 0.0};
  double beta = 0.0;
};

/// Offset of the beta coset over the alpha class (m, n).
using BetaOffsetRule = std::function<double(long m, long n)>;

/// The lattice L = {(m a1 + n a2, offset(m, n) + beta_step l)} in C x R.
class LatticeSpec {
 public:
  /// Throws std::invalid_argument if a1, a2 are R-linearly dependent or
  /// beta_step <= 0. An empty rule means offset 0.
  LatticeSpec(Complex a1, Complex a2, double beta_step, BetaOffsetRule rule = {});

  /// a1 = 1, a2 = i, beta_step = 1, zero offsets.
  static LatticeSpec gaussian();

  Complex a1() const { return a1_; }
  Complex a2() const { return a2_; }
  double beta_step() const { return beta_step_; }
  bool has_offsets() const { return static_cast<bool>(rule_); }

  Complex alpha(long m, long n) const { return static_cast<double>(m) * a1_ + static_cast<double>(n) * a2_; }
  double beta_offset(long m, long n) const { return rule_ ? rule_(m, n) : 0.0; }
  HeisenbergParam point(long m, long n, long l) const {
    return {alpha(m, n), beta_offset(m, n) + beta_step_ * static_cast<double>(l)};
  }

  /// |Im(conj(a1) a2)|, the area of the alpha cell.
  double alpha_cell_area() const;

  /// Smallest R such that every complex number lies within R of the alpha lattice.
  double alpha_covering_radius() const;

 private:
  Complex a1_, a2_;
  double beta_step_;
  BetaOffsetRule rule_;
};

/// |Im(conj(a1) a2)| * beta_step.
double lattice_covolume(const LatticeSpec& spec);

/// The upper-triangular stabilizer matrix of (alpha, beta):
///   M3: [[1, -conj(a), -|a|^2/2 + i b], [0, 1, a], [0, 0, 1]]
///   M2: [[1, i conj(a), i |a|^2/2 + b], [0, 1, a], [0, 0, 1]]
/// Throws std::invalid_argument for the ball model.
Isometry stabilizer_matrix(const HeisenbergParam& p, Model model);

/// Image of an M3 point under stabilizer_matrix(p, M3), in closed form.
CVector stabilizer_apply_m3(const HeisenbergParam& p, const CVector& z);

struct LatticeAlpha {
  long m, n;
  Complex alpha;
};

struct LatticePoint {
  long m, n, l;
  HeisenbergParam param;
};

/// Rows m of the (m, n) box guaranteed to contain every |alpha| <= R_alpha.
std::pair<long, long> alpha_row_range(const LatticeSpec& spec, double R_alpha);

/// The alpha lattice points with index m and |alpha| <= R_alpha, ordered by n.
std::vector<LatticeAlpha> alpha_row(const LatticeSpec& spec, long m, double R_alpha);

/// All alpha lattice points with |alpha| <= R_alpha, ordered by (m, n).
std::vector<LatticeAlpha> enumerate_alpha(const LatticeSpec& spec, double R_alpha);

/// Range of l with |offset + step l| <= R_beta (empty when first > second).
std::pair<long, long> beta_index_range(const LatticeSpec& spec, long m, long n, double R_beta);

/// Every (alpha, beta) in L with |alpha| <= R_alpha and |beta| <= R_beta,
/// each once, ordered lexicographically by (m, n, l).
std::vector<LatticePoint> enumerate_ball(const LatticeSpec& spec, double R_alpha, double R_beta,
                                         bool exclude_origin = false);

}  // namespace pbl
