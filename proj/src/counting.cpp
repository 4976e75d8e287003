#include "pbl/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pbl/errors.hpp"
#include "pbl/geometry.hpp"
#include "pbl/quadrature.hpp"

namespace pbl {

namespace {

// Relative widening of certified enumeration bounds against rounding.
constexpr double kBoxSlack = 1e-9;

// Horospherical data of an M3 point: height u = -(2 Re z1 + |z2|^2) > 0 and y = Im z1.
struct Horo {
  double u;
  double y;
  Complex z2;
};

Horo horo_of(const ModelPoint& p) {
  if (p.model() != Model::M3) {
    throw std::invalid_argument("lattice orbit sources act on M3 points only");
  }
  return {-model_indicator(p), p[0].imag(), p[1]};
}

bool is_scalar_matrix(const CMatrix& g) {
  const Complex d = g(0, 0);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const Complex expect = i == j ? d : Complex(0.0, 0.0);
      if (std::abs(g(i, j) - expect) > 1e-12) return false;
    }
  }
  return true;
}

double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2; }
double log_cosh(double x) { return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2; }

}  // namespace

OrbitSource::OrbitSource(std::vector<Isometry> elements) : data_(std::move(elements)) {
  const auto& els = std::get<std::vector<Isometry>>(data_);
  for (const Isometry& g : els) {
    if (g.model() != els.front().model() || g.n() != els.front().n()) {
      throw std::invalid_argument("OrbitSource: elements act on different models");
    }
  }
}

OrbitSource::OrbitSource(LatticeSpec spec) : data_(std::move(spec)) {}

Model OrbitSource::model() const {
  if (is_lattice()) return Model::M3;
  const auto& els = elements();
  return els.empty() ? Model::Ball : els.front().model();
}

LatticeBox certified_box(const ModelPoint& z, const ModelPoint& w, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("certified_box: delta must be nonnegative");
  const Horo hz = horo_of(z);
  const Horo hw = horo_of(w);
  const double Q = std::cosh(delta / 2.0) * std::sqrt(hz.u * hw.u) * (1.0 + kBoxSlack);
  const double R_alpha = std::abs(hz.z2 - hw.z2) + std::sqrt(std::max(0.0, 2.0 * Q - hz.u - hw.u));
  const double R_beta = Q + std::abs(hz.y - hw.y) + R_alpha * (std::abs(hw.z2) + std::abs(hz.z2)) +
                        std::abs(hz.z2) * std::abs(hw.z2);
  return {R_alpha * (1.0 + kBoxSlack), R_beta * (1.0 + kBoxSlack)};
}

std::vector<OrbitHit> orbit_hits(const OrbitSource& src, const ModelPoint& z, const ModelPoint& w,
                                 double delta, const CountOptions& opts) {
  if (!(delta >= 0.0)) throw std::invalid_argument("counting: delta must be nonnegative");
  std::vector<OrbitHit> hits;

  if (!src.is_lattice()) {
    if (z.model() != src.model() || w.model() != src.model()) {
      throw std::invalid_argument("counting: points and orbit source live in different models");
    }
    const auto& els = src.elements();
    for (std::size_t i = 0; i < els.size(); ++i) {
      const double c = cosh2_half_distance(z, apply(els[i], w));
      const double d = distance_from_cosh2(c);
      if (d <= delta) hits.push_back({static_cast<long>(i), 0, 0, c, d});
    }
    return hits;
  }

  const LatticeSpec& spec = src.lattice();
  const Horo hz = horo_of(z);
  const Horo hw = horo_of(w);
  const double uu = hz.u * hw.u;
  const double Q = std::cosh(delta / 2.0) * std::sqrt(uu) * (1.0 + kBoxSlack);
  const LatticeBox box = certified_box(z, w, delta);

  long long candidates = 0;
  for (const LatticeAlpha& a : enumerate_alpha(spec, box.R_alpha)) {
    // <z~, (gamma w)~> = -re + i im with re depending on alpha only.
    const Complex w2 = hw.z2 + a.alpha;
    const double re = 0.5 * (hz.u + hw.u) + 0.5 * std::norm(hz.z2 - w2);
    if (re > Q) continue;
    // im = centre - beta
    const double centre = hz.y - hw.y + (std::conj(a.alpha) * hw.z2).imag() + (hz.z2 * std::conj(w2)).imag();
    const double off = spec.beta_offset(a.m, a.n);
    const double step = spec.beta_step();
    const double half = std::sqrt(std::max(0.0, Q * Q - re * re)) * (1.0 + kBoxSlack) + kBoxSlack;
    const long lo = static_cast<long>(std::ceil((centre - half - off) / step));
    const long hi = static_cast<long>(std::floor((centre + half - off) / step));
    if (hi < lo) continue;
    candidates += hi - lo + 1;
    if (candidates > opts.max_candidates) {
      throw CertificationError("counting: candidate budget of " + std::to_string(opts.max_candidates) +
                                   " exhausted before the enumeration box was covered",
                               static_cast<long long>(hits.size()));
    }
    for (long l = lo; l <= hi; ++l) {
      const double im = centre - (off + step * static_cast<double>(l));
      const double c = (re * re + im * im) / uu;
      const double d = distance_from_cosh2(c);
      if (d <= delta) hits.push_back({a.m, a.n, l, std::max(c, 1.0), d});
    }
  }
  return hits;
}

long long counting_function(const OrbitSource& src, const ModelPoint& z, const ModelPoint& w, double delta,
                            const CountOptions& opts) {
  return static_cast<long long>(orbit_hits(src, z, w, delta, opts).size());
}

double counting_upper_bound(int n, double r_X, double delta) {
  return counting_upper_bound(n, r_X, delta, ball_volume_constant(n));
}

double counting_upper_bound(int n, double r_X, double delta, double c_n) {
  if (n < 2) throw std::invalid_argument("counting_upper_bound: n must be >= 2");
  if (!(r_X > 0.0)) throw std::invalid_argument("counting_upper_bound: r_X must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("counting_upper_bound: delta must be nonnegative");
  const double num = log_sinh((2.0 * delta + r_X) / 4.0);
  const double den = log_sinh(r_X / 4.0);
  return c_n * std::exp(2.0 * n * (num - den));
}

double local_injectivity_radius(const OrbitSource& src, const ModelPoint& w) {
  if (!src.is_lattice()) {
    double best = std::numeric_limits<double>::infinity();
    for (const Isometry& g : src.elements()) {
      if (is_scalar_matrix(g.matrix())) continue;
      best = std::min(best, distance(w, apply(g, w)));
    }
    return best;
  }
  const LatticeSpec& spec = src.lattice();
  for (double delta = 1.0; delta <= 64.0; delta *= 2.0) {
    double best = std::numeric_limits<double>::infinity();
    for (const OrbitHit& h : orbit_hits(src, w, w, delta)) {
      const HeisenbergParam p = spec.point(h.m, h.n, h.l);
      if (p.alpha == Complex(0.0, 0.0) && p.beta == 0.0) continue;
      best = std::min(best, h.distance);
    }
    if (std::isfinite(best)) return best;
  }
  throw NumericalError("local_injectivity_radius: no non-identity element within distance 64");
}

SliceRadius slice_injectivity_radius(const LatticeSpec& spec, double u) {
  if (!(u > 0.0)) throw std::invalid_argument("slice_injectivity_radius: height u must be positive");
  const OrbitSource src(spec);
  auto radius_at = [&](double s, double t) {
    const Complex z2 = s * spec.a1() + t * spec.a2();
    const ModelPoint p(Model::M3, {Complex(-(u + std::norm(z2)) / 2.0, 0.0), z2});
    return local_injectivity_radius(src, p);
  };

  constexpr int kGrid = 12;
  double best = std::numeric_limits<double>::infinity();
  double bs = 0.0, bt = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const double s = static_cast<double>(i) / kGrid;
      const double t = static_cast<double>(j) / kGrid;
      const double r = radius_at(s, t);
      if (r < best) {
        best = r;
        bs = s;
        bt = t;
      }
    }
  }
  // Compass search in cell coordinates.
  for (double h = 1.0 / kGrid; h > 1e-7; h *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      const double cand[4][2] = {{bs + h, bt}, {bs - h, bt}, {bs, bt + h}, {bs, bt - h}};
      for (const auto& c : cand) {
        const double r = radius_at(c[0], c[1]);
        if (r < best - 1e-15) {
          best = r;
          bs = c[0];
          bt = c[1];
          moved = true;
        }
      }
    }
  }
  return {best, bs * spec.a1() + bt * spec.a2()};
}

double truncated_series(const std::function<double(double)>& f, const OrbitSource& src, const ModelPoint& z,
                        const ModelPoint& w, double delta, const CountOptions& opts) {
  std::vector<double> terms;
  for (const OrbitHit& h : orbit_hits(src, z, w, delta, opts)) terms.push_back(f(h.distance));
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

TailBound tail_bound(const std::function<double(double)>& f, int n, double r_X, double delta,
                     const OrbitSource& src, const ModelPoint& z, const ModelPoint& w, const CountOptions& opts) {
  if (n < 2) throw std::invalid_argument("tail_bound: n must be >= 2");
  if (!(r_X > 0.0)) throw std::invalid_argument("tail_bound: r_X must be positive");
  if (!(delta > r_X / 2.0)) throw std::invalid_argument("tail_bound: delta must exceed r_X/2");

  constexpr int kSamples = 400;
  const double reach = std::max(4.0 * delta, delta + 50.0);
  double prev = f(reach / kSamples);
  for (int i = 2; i <= kSamples; ++i) {
    const double cur = f(reach * i / kSamples);
    if (!std::isfinite(cur) || cur < 0.0) throw std::invalid_argument("tail_bound: f must be finite and positive");
    if (cur > prev * (1.0 + 1e-12)) throw std::invalid_argument("tail_bound: f is not nonincreasing on the sample grid");
    prev = cur;
  }

  TailBound out{};
  const auto hits = orbit_hits(src, z, w, delta, opts);
  out.near_count = static_cast<long long>(hits.size());
  std::vector<double> terms;
  for (const OrbitHit& h : hits) terms.push_back(f(h.distance));
  std::sort(terms.begin(), terms.end());
  for (double t : terms) out.near_sum += t;

  out.ball_term = f(delta) * counting_upper_bound(n, r_X, delta);

  const double log_coeff = std::log(4.0 * std::numbers::pi) - std::lgamma(static_cast<double>(n)) -
                           2.0 * n * log_sinh(r_X / 4.0);
  const RealFunction integrand = [&](double rho) {
    const double fr = f(rho);
    if (fr <= 0.0) return 0.0;
    const double x = (2.0 * rho + r_X) / 4.0;
    return std::exp(std::log(fr) + (2.0 * n - 1.0) * log_sinh(x) + log_cosh(x) + log_coeff);
  };
  // A non-decaying integrand means the integral diverges; the bound is then vacuous.
  const double g_near = integrand(delta + 100.0);
  const double g_far = integrand(delta + 200.0);
  if (g_far > 0.0 && g_far >= 0.5 * g_near) {
    out.integral_term = std::numeric_limits<double>::infinity();
  } else {
    out.integral_term = integrate_to_infinity(integrand, delta, std::max(1.0, r_X)).value;
  }
  out.total = out.near_sum + out.ball_term + out.integral_term;
  return out;
}

}  // namespace pbl
