#include "pbl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbl/errors.hpp"

namespace pbl {

namespace {

constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kKronrod[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
constexpr double kGauss[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const RealFunction& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = kKronrod[7] * fc;
  double gauss = kGauss[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kKronrod[j] * pair;
    if (j % 2 == 1) gauss += kGauss[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

// t in [0, 1) -> a + scale t / (1 - t)
RealFunction map_to_half_line(const RealFunction& f, double a, double scale) {
  return [&f, a, scale](double t) {
    const double u = 1.0 - t;
    if (u <= 0.0) return 0.0;
    const double v = f(a + scale * t / u);
    return v == 0.0 ? 0.0 : v * scale / (u * u);
  };
}

}  // namespace

QuadratureResult integrate(const RealFunction& f, double a, double b, const QuadratureOptions& opts) {
  QuadratureResult out;
  if (a == b) return out;
  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod(f, a, b);
  out.evaluations = 15;
  double total = first.value;
  double error = first.error;
  heap.push(first);

  for (int iter = 0;; ++iter) {
    if (!std::isfinite(total)) throw NumericalError("integrate: non-finite integrand value");
    if (error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) break;
    if (iter >= opts.max_subdivisions) {
      throw NumericalError("integrate: tolerance not reached after " +
                           std::to_string(opts.max_subdivisions) + " subdivisions (error " +
                           std::to_string(error) + ", value " + std::to_string(total) + ")");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval exhausted at double resolution; its error cannot shrink further.
      throw NumericalError("integrate: subinterval collapsed before convergence");
    }
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the segments to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  std::vector<Segment> segments;
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& x, const Segment& y) { return std::abs(x.value) < std::abs(y.value); });
  for (const Segment& s : segments) {
    total += s.value;
    error += s.error;
  }
  out.value = total;
  out.error = error;
  return out;
}

QuadratureResult integrate_to_infinity(const RealFunction& f, double a, double scale,
                                       const QuadratureOptions& opts) {
  if (!(scale > 0.0)) throw std::invalid_argument("integrate_to_infinity: scale must be positive");
  return integrate(map_to_half_line(f, a, scale), 0.0, 1.0, opts);
}

LogReal integrate_log_to_infinity(const RealFunction& log_f, double a, double scale,
                                  const QuadratureOptions& opts) {
  if (!(scale > 0.0)) throw std::invalid_argument("integrate_log_to_infinity: scale must be positive");
  // Peak of the mapped log-integrand on a coarse grid.
  double peak = -std::numeric_limits<double>::infinity();
  constexpr int kGrid = 400;
  for (int i = 0; i < kGrid; ++i) {
    const double t = (i + 0.5) / kGrid;
    const double u = 1.0 - t;
    peak = std::max(peak, log_f(a + scale * t / u) + std::log(scale / (u * u)));
  }
  if (!std::isfinite(peak)) throw NumericalError("integrate_log_to_infinity: integrand has no finite peak");
  const RealFunction shifted = [&log_f, peak](double x) { return std::exp(log_f(x) - peak); };
  const RealFunction mapped = map_to_half_line(shifted, a, scale);
  const QuadratureResult r = integrate(mapped, 0.0, 1.0, opts);
  if (!(r.value > 0.0)) throw NumericalError("integrate_log_to_infinity: non-positive integral");
  return LogReal::from_log(peak + std::log(r.value));
}

LogReal integrate_log_real_line(const RealFunction& log_f, double center, double scale,
                                const QuadratureOptions& opts) {
  const RealFunction mirrored = [&log_f, center](double x) { return log_f(2.0 * center - x); };
  return integrate_log_to_infinity(log_f, center, scale, opts) +
         integrate_log_to_infinity(mirrored, center, scale, opts);
}

}  // namespace pbl
