#include "pbl/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace pbl {

namespace {

// Boundary points |alpha| = R are kept despite rounding in |alpha|^2.
constexpr double kRadiusSlack = 1e-12;

}  // namespace

LatticeSpec::LatticeSpec(Complex a1, Complex a2, double beta_step, BetaOffsetRule rule)
    : a1_(a1), a2_(a2), beta_step_(beta_step), rule_(std::move(rule)) {
  if (!std::isfinite(a1.real()) || !std::isfinite(a1.imag()) || !std::isfinite(a2.real()) ||
      !std::isfinite(a2.imag())) {
    throw std::invalid_argument("LatticeSpec: non-finite alpha generator");
  }
  const double scale = std::abs(a1) * std::abs(a2);
  if (!(scale > 0.0) || alpha_cell_area() <= 1e-12 * scale) {
    throw std::invalid_argument("LatticeSpec: alpha generators a1, a2 are linearly dependent over R");
  }
  if (!(beta_step > 0.0) || !std::isfinite(beta_step)) {
    throw std::invalid_argument("LatticeSpec: beta_step must be positive");
  }
}

LatticeSpec LatticeSpec::gaussian() { return LatticeSpec({1.0, 0.0}, {0.0, 1.0}, 1.0); }

double LatticeSpec::alpha_cell_area() const { return std::abs((std::conj(a1_) * a2_).imag()); }

double LatticeSpec::alpha_covering_radius() const {
  // Every point of a parallelogram cell is within half its longer diagonal of a vertex.
  return 0.5 * std::max(std::abs(a1_ + a2_), std::abs(a1_ - a2_));
}

double lattice_covolume(const LatticeSpec& spec) { return spec.alpha_cell_area() * spec.beta_step(); }

Isometry stabilizer_matrix(const HeisenbergParam& p, Model model) {
  const Complex a = p.alpha;
  const double a2 = std::norm(a);
  const Complex i(0.0, 1.0);
  CMatrix m = CMatrix::Identity(3, 3);
  switch (model) {
    case Model::M3:
      m(0, 1) = -std::conj(a);
      m(0, 2) = Complex(-a2 / 2.0, p.beta);
      m(1, 2) = a;
      break;
    case Model::M2:
      m(0, 1) = i * std::conj(a);
      m(0, 2) = Complex(p.beta, a2 / 2.0);
      m(1, 2) = a;
      break;
    case Model::Ball:
      throw std::invalid_argument("stabilizer_matrix: model must be M2 or M3");
  }
  return Isometry(std::move(m), model);
}

CVector stabilizer_apply_m3(const HeisenbergParam& p, const CVector& z) {
  if (z.size() != 2) throw std::invalid_argument("stabilizer_apply_m3: point must have 2 coordinates");
  CVector out(2);
  out[0] = z[0] - std::conj(p.alpha) * z[1] + Complex(-std::norm(p.alpha) / 2.0, p.beta);
  out[1] = z[1] + p.alpha;
  return out;
}

std::pair<long, long> alpha_row_range(const LatticeSpec& spec, double R_alpha) {
  if (!(R_alpha >= 0.0)) throw std::invalid_argument("alpha_row_range: R_alpha must be nonnegative");
  // m = <alpha, b1> for the dual vector b1, |b1| = |a2| / area.
  const long M = static_cast<long>(std::floor(R_alpha * std::abs(spec.a2()) / spec.alpha_cell_area() + 1e-9));
  return {-M, M};
}

std::vector<LatticeAlpha> alpha_row(const LatticeSpec& spec, long m, double R_alpha) {
  std::vector<LatticeAlpha> out;
  const Complex base = static_cast<double>(m) * spec.a1();
  const Complex a2 = spec.a2();
  // |base + n a2|^2 <= R^2 is a quadratic in n.
  const double qa = std::norm(a2);
  const double qb = 2.0 * (base * std::conj(a2)).real();
  const double qc = std::norm(base) - R_alpha * R_alpha;
  const double disc = qb * qb - 4.0 * qa * qc;
  const double r2 = R_alpha * R_alpha * (1.0 + kRadiusSlack);
  if (disc < -1e-9 * qb * qb - 1e-9) return out;
  const double root = std::sqrt(std::max(disc, 0.0));
  const long lo = static_cast<long>(std::floor((-qb - root) / (2.0 * qa))) - 1;
  const long hi = static_cast<long>(std::ceil((-qb + root) / (2.0 * qa))) + 1;
  for (long n = lo; n <= hi; ++n) {
    const Complex alpha = spec.alpha(m, n);
    if (std::norm(alpha) <= r2) out.push_back({m, n, alpha});
  }
  return out;
}

std::vector<LatticeAlpha> enumerate_alpha(const LatticeSpec& spec, double R_alpha) {
  std::vector<LatticeAlpha> out;
  const auto [m_lo, m_hi] = alpha_row_range(spec, R_alpha);
  for (long m = m_lo; m <= m_hi; ++m) {
    auto row = alpha_row(spec, m, R_alpha);
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

std::pair<long, long> beta_index_range(const LatticeSpec& spec, long m, long n, double R_beta) {
  if (!(R_beta >= 0.0)) throw std::invalid_argument("beta_index_range: R_beta must be nonnegative");
  const double off = spec.beta_offset(m, n);
  const double step = spec.beta_step();
  const double slack = kRadiusSlack * std::max(1.0, R_beta);
  long lo = static_cast<long>(std::ceil((-R_beta - off) / step - 1e-9));
  long hi = static_cast<long>(std::floor((R_beta - off) / step + 1e-9));
  while (std::abs(off + step * static_cast<double>(lo)) > R_beta + slack && lo <= hi) ++lo;
  while (std::abs(off + step * static_cast<double>(hi)) > R_beta + slack && hi >= lo) --hi;
  return {lo, hi};
}

std::vector<LatticePoint> enumerate_ball(const LatticeSpec& spec, double R_alpha, double R_beta,
                                         bool exclude_origin) {
  if (!(R_alpha >= 0.0) || !(R_beta >= 0.0)) {
    throw std::invalid_argument("enumerate_ball: radii must be nonnegative");
  }
  std::vector<LatticePoint> out;
  for (const LatticeAlpha& a : enumerate_alpha(spec, R_alpha)) {
    const auto [lo, hi] = beta_index_range(spec, a.m, a.n, R_beta);
    for (long l = lo; l <= hi; ++l) {
      const HeisenbergParam p = spec.point(a.m, a.n, l);
      if (exclude_origin && a.m == 0 && a.n == 0 && p.beta == 0.0) continue;
      out.push_back({a.m, a.n, l, p});
    }
  }
  return out;
}

}  // namespace pbl
