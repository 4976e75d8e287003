#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "pbl/lattice.hpp"

namespace pbl {

/// The group Gamma whose orbit is counted: an explicit finite list of
/// isometries, or the M3 stabilizer lattice of a LatticeSpec.
class OrbitSource {
 public:
  /// All elements must share one model and dimension (std::invalid_argument otherwise).
  explicit OrbitSource(std::vector<Isometry> elements);
  explicit OrbitSource(LatticeSpec spec);

  bool is_lattice() const { return std::holds_alternative<LatticeSpec>(data_); }
  const LatticeSpec& lattice() const { return std::get<LatticeSpec>(data_); }
  const std::vector<Isometry>& elements() const { return std::get<std::vector<Isometry>>(data_); }

  /// Model the source acts on (M3 for lattices).
  Model model() const;

 private:
  std::variant<std::vector<Isometry>, LatticeSpec> data_;
};

struct CountOptions {
  /// Maximum number of candidate lattice elements examined before giving up.
  long long max_candidates = 200'000'000;
};

/// One orbit element gamma with d(z, gamma w) <= delta. For lattice sources
/// (m, n, l) index the element; for explicit sources `m` is the list index.
struct OrbitHit {
  long m = 0, n = 0, l = 0;
  double cosh2 = 1.0;
  double distance = 0.0;
};

/// Certified box |alpha| <= R_alpha, |beta| <= R_beta containing every lattice
/// element with d(z, gamma w) <= delta, for M3 points z, w.
struct LatticeBox {
  double R_alpha;
  double R_beta;
};
LatticeBox certified_box(const ModelPoint& z, const ModelPoint& w, double delta);

/// Orbit elements within distance delta, in enumeration order. Throws
/// CertificationError if the candidate budget is exhausted.
std::vector<OrbitHit> orbit_hits(const OrbitSource& src, const ModelPoint& z, const ModelPoint& w,
                                 double delta, const CountOptions& opts = {});

/// N(z, w; delta) = #{gamma : d(z, gamma w) <= delta}.
long long counting_function(const OrbitSource& src, const ModelPoint& z, const ModelPoint& w,
                            double delta, const CountOptions& opts = {});

/// c_n sinh^{2n}((2 delta + r_X)/4) / sinh^{2n}(r_X/4). Throws
/// std::invalid_argument unless r_X > 0, delta >= 0 and n >= 2.
double counting_upper_bound(int n, double r_X, double delta);
double counting_upper_bound(int n, double r_X, double delta, double c_n);

/// min over non-identity gamma of d(w, gamma w).
double local_injectivity_radius(const OrbitSource& src, const ModelPoint& w);

struct SliceRadius {
  double radius;
  Complex z2;  // where the minimum over the slice is attained
};

/// min over z2 in one alpha cell (height u, Im z1 = 0) of the local
/// injectivity radius, by a coarse grid followed by local refinement to 1e-6.
SliceRadius slice_injectivity_radius(const LatticeSpec& spec, double u);

struct TailBound {
  double near_sum;  // sum of f(d) over orbit elements with d <= delta
  double ball_term;  // f(delta) times the counting bound at delta
  double integral_term;
  double total;
  long long near_count;
};

/// The three-term majorant of sum_gamma f(d(z, gamma w)) for f positive and
/// nonincreasing. The integral term is +infinity when its integrand does not
/// decay. Throws std::invalid_argument if delta <= r_X/2 or f increases on a
/// sampled grid.
TailBound tail_bound(const std::function<double(double)>& f, int n, double r_X, double delta,
                     const OrbitSource& src, const ModelPoint& z, const ModelPoint& w,
                     const CountOptions& opts = {});

/// sum of f(d(z, gamma w)) over orbit elements with d <= delta.
double truncated_series(const std::function<double(double)>& f, const OrbitSource& src,
                        const ModelPoint& z, const ModelPoint& w, double delta,
                        const CountOptions& opts = {});

}  // namespace pbl
