#include "pbl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "pbl/errors.hpp"
#include "pbl/quadrature.hpp"

namespace pbl {

namespace {

constexpr double kPi = std::numbers::pi;

double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2; }
double log_cosh(double x) { return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2; }

// sqrt(pi) Gamma((k-1)/2) / Gamma(k/2) = A^{k-1} * integral of (A^2 + b^2)^{-k/2} db.
double log_beta_factor(int k) {
  return 0.5 * std::log(kPi) + std::lgamma(0.5 * (k - 1)) - std::lgamma(0.5 * k);
}

// (2 pi)^{k-1} Gamma(k - 3/2) / (k^{k-3/2} Gamma(k-1))
double log_r_closed(int k) {
  return (k - 1) * std::log(2.0 * kPi) + std::lgamma(k - 1.5) - (k - 1.5) * std::log(static_cast<double>(k)) -
         std::lgamma(k - 1.0);
}

LogReal sum_terms(const std::vector<std::pair<std::string, LogReal>>& terms) {
  std::vector<LogReal> values;
  for (const auto& t : terms) values.push_back(t.second);
  return log_sum(values);
}

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Neumaier-compensated sum in the given order.
double compensated_sum(const std::vector<double>& xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

}  // namespace

LogReal ConstantModel::at(int k) const {
  if (!(c_gamma > 0.0) || !std::isfinite(c_gamma)) {
    throw std::invalid_argument("ConstantModel: c_gamma must be positive");
  }
  return LogReal::from_log(std::log(c_gamma) + exponent * std::log(static_cast<double>(k)));
}

const LogReal& BoundReport::term(const std::string& name) const {
  for (const auto& t : terms) {
    if (t.first == name) return t.second;
  }
  throw std::invalid_argument("BoundReport: no term named " + name);
}

BoundReport cocompact_bound(int n, int k, double r_X, const ConstantModel& cm) {
  if (n < 2) throw std::invalid_argument("cocompact_bound: n must be >= 2");
  if (k < 2 * n + 2) throw std::invalid_argument("cocompact_bound: k must be >= 2n+2");
  if (!(r_X > 0.0) || !std::isfinite(r_X)) throw std::invalid_argument("cocompact_bound: r_X must be positive");
  const LogReal C = cm.at(k);
  const double two_n = 2.0 * n;
  const double ls = log_sinh(r_X / 4.0);

  BoundReport rep;
  rep.n = n;
  rep.k = k;
  rep.r_X = r_X;
  rep.terms.emplace_back("identity_term", C);
  rep.terms.emplace_back(
      "middle_term",
      C * LogReal::from_log(two_n * log_cosh(r_X / 4.0) - std::log(static_cast<double>(k - 2 * n - 1)) - two_n * ls));
  rep.terms.emplace_back(
      "ring_term",
      C * LogReal::from_log(two_n * log_sinh(5.0 * r_X / 8.0) - two_n * ls - k * log_cosh(3.0 * r_X / 8.0)));
  rep.total = sum_terms(rep.terms);
  rep.normalized_total = rep.total / C;
  return rep;
}

LatticeSumResult cusp_lattice_sum(int k, const LatticeSpec& spec, double rel_tol, int jobs) {
  if (k < 6) throw std::invalid_argument("cusp_lattice_sum: k must be >= 6");
  if (!(rel_tol > 0.0) || rel_tol > 1e-3) throw std::invalid_argument("cusp_lattice_sum: rel_tol must lie in (0, 1e-3]");
  const double a = k / (2.0 * kPi);
  const double log_a = std::log(a);
  const double step = spec.beta_step();
  const double V = spec.alpha_cell_area();
  const double rho = spec.alpha_covering_radius();
  const double log_F = log_beta_factor(k);
  const int workers = resolve_jobs(jobs);

  // Sum over one alpha of all beta terms with |beta| <= B, and the certified
  // bound on the beta terms beyond B.
  auto alpha_column = [&](const LatticeAlpha& al, double B, double& tail) {
    const double A = a + 0.5 * std::norm(al.alpha);
    const double A2 = A * A;
    const auto [lo, hi] = beta_index_range(spec, al.m, al.n, B);
    const double off = spec.beta_offset(al.m, al.n);
    double s = 0.0;
    for (long l = lo; l <= hi; ++l) {
      const double b = off + step * static_cast<double>(l);
      s += std::exp(0.5 * k * (2.0 * log_a - std::log(A2 + b * b)));
    }
    const double c = B - step;
    const double log_crude = (1.0 - k) * std::log(c) - std::log(k - 1.0);
    const double log_fine = std::log(kPi / (2.0 * A)) - 0.5 * (k - 2) * std::log(A2 + c * c);
    tail = std::exp(std::log(2.0 / step) + k * log_a + std::min(log_crude, log_fine));
    return s;
  };

  // Sum over alpha with |alpha| > R of every beta term.
  auto alpha_tail = [&](double R) {
    const double t0 = R - 2.0 * rho;
    const double X = a + 0.5 * t0 * t0;
    const double widen = 1.0 + rho / t0;
    const double peak = 2.0 * a * std::exp((k - 1) * (log_a - std::log(X))) / (k - 1);
    const double bulk = std::exp(2.0 * log_a + log_F + (k - 2) * (log_a - std::log(X))) / (step * (k - 2));
    return 2.0 * kPi / V * widen * (peak + bulk);
  };

  double R = std::max(4.0 * rho + 1.0, 2.0 * std::sqrt(a));
  double B = std::max(4.0 * step, 4.0 * a);
  for (int iter = 0; iter < 80; ++iter) {
    const auto [m_lo, m_hi] = alpha_row_range(spec, R);
    const long rows = m_hi - m_lo + 1;
    std::vector<double> row_sums(rows, 0.0), row_tails(rows, 0.0);
    std::vector<long long> row_terms(rows, 0);
    auto work = [&](int w) {
      for (long r = w; r < rows; r += workers) {
        std::vector<double> col_sums;
        double tails = 0.0;
        long long count = 0;
        for (const LatticeAlpha& al : alpha_row(spec, m_lo + r, R)) {
          double t = 0.0;
          col_sums.push_back(alpha_column(al, B, t));
          tails += t;
          const auto [lo, hi] = beta_index_range(spec, al.m, al.n, B);
          count += std::max(0L, hi - lo + 1);
        }
        row_sums[r] = compensated_sum(col_sums);
        row_tails[r] = tails;
        row_terms[r] = count;
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }

    const double partial = compensated_sum(row_sums);
    double beta_tail = 0.0;
    long long terms = 0;
    for (long r = 0; r < rows; ++r) {
      beta_tail += row_tails[r];
      terms += row_terms[r];
    }
    const double a_tail = alpha_tail(R);
    const double budget = rel_tol * partial;
    if (a_tail + beta_tail <= budget) {
      LatticeSumResult out;
      out.value = LogReal(partial);
      out.R_alpha = R;
      out.R_beta = B;
      out.tail_bound = a_tail + beta_tail;
      out.terms = terms;
      return out;
    }
    if (a_tail > 0.5 * budget) R *= 1.25;
    if (beta_tail > 0.5 * budget) B *= 1.25;
  }
  throw NumericalError("cusp_lattice_sum: truncation tail did not fall below rel_tol");
}

LogReal cusp_integral_majorant(int k) {
  if (k < 6) throw std::invalid_argument("cusp_integral_majorant: k must be >= 6");
  // 2 pi (k/2pi)^k * beta factor * exact r-integral, where the exact
  // r-integral is half the (2 pi)^{k-1} Gamma(k-3/2) / (k^{k-3/2} Gamma(k-1)) form.
  const double a = k / (2.0 * kPi);
  return LogReal::from_log(std::log(2.0 * kPi) + k * std::log(a) + log_beta_factor(k) + log_r_closed(k) -
                           std::numbers::ln2);
}

GammaChain gamma_integral_chain(int k) {
  if (k < 6) throw std::invalid_argument("gamma_integral_chain: k must be >= 6");
  const double a = k / (2.0 * kPi);
  GammaChain out;
  out.k = k;
  out.beta_closed = std::exp(log_beta_factor(k));

  const double A = a;
  const RealFunction log_beta = [k, A](double b) { return (k - 1) * std::log(A) - 0.5 * k * std::log(A * A + b * b); };
  out.beta_quad = integrate_log_real_line(log_beta, 0.0, A / std::sqrt(static_cast<double>(k))).value();
  out.beta_rel_error = std::abs(out.beta_quad / out.beta_closed - 1.0);

  out.r_closed = LogReal::from_log(log_r_closed(k));
  const double r_scale = std::sqrt(2.0 * a / (k - 1));
  const RealFunction log_r = [k, a](double r) { return -(k - 1) * std::log(a + 0.5 * r * r); };
  out.r_quad = integrate_log_to_infinity(log_r, 0.0, r_scale);
  out.r_ratio = (out.r_quad / out.r_closed).value();
  out.chained = LogReal(out.beta_closed) * out.r_closed;

  const RealFunction log_outer = [k, a](double r) {
    const double Ar = a + 0.5 * r * r;
    const RealFunction inner = [k, Ar](double b) { return -0.5 * k * std::log(Ar * Ar + b * b); };
    return integrate_log_real_line(inner, 0.0, Ar / std::sqrt(static_cast<double>(k))).log_abs();
  };
  out.double_quad = integrate_log_to_infinity(log_outer, 0.0, r_scale);
  return out;
}

LogReal cusp_term_factor(int k, CuspTerm variant) {
  if (k < 6) throw std::invalid_argument("cusp_term_factor: k must be >= 6");
  const double half_k_shift = variant == CuspTerm::Chained ? 0.5 * k - 0.5 : 0.5 * k - 1.0;
  return LogReal::from_log(0.5 * std::log(kPi) + std::lgamma(half_k_shift) + std::lgamma(k - 1.5) -
                           std::lgamma(0.5 * k) - std::lgamma(k - 1.0) + 1.5 * std::log(static_cast<double>(k)));
}

BoundReport theorem3_bound(int k, double r_X, const ConstantModel& cm, const LatticeSpec& spec,
                           const Theorem3Options& opts) {
  if (k < 6) throw std::invalid_argument("theorem3_bound: k must be >= 6");
  if (!(r_X > 0.0) || !std::isfinite(r_X)) throw std::invalid_argument("theorem3_bound: r_X must be positive");
  BoundReport rep = cocompact_bound(2, k, r_X, cm);
  const LogReal C = cm.at(k);
  const LogReal cusp = C * cusp_term_factor(k, opts.cusp);
  rep.terms.emplace_back("cusp_term", cusp);
  rep.total = sum_terms(rep.terms);
  rep.normalized_total = rep.total / C;
  if (opts.with_lattice_sum) {
    const LatticeSumResult sum = cusp_lattice_sum(k, spec, opts.lattice_rel_tol, opts.jobs);
    rep.lattice_alternative = C * sum.value;
    rep.cusp_dominates_lattice = cusp >= C * sum.value * LogReal(lattice_covolume(spec));
  }
  return rep;
}

namespace {

// Maximizer of g on [lo, hi] by golden-section search; g may return -inf.
double golden_max(const std::function<double(double)>& g, double lo, double hi) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = g(x1);
    }
  }
  return f1 >= f2 ? x1 : x2;
}

}  // namespace

MaximaResult maxima_locate(int k, double tol) {
  if (k < 1) throw std::invalid_argument("maxima_locate: k must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("maxima_locate: tol must be positive");
  const double target = k / (4.0 * kPi);
  auto logp = [k](double x1, double x2, double y2) { return log_petersson_objective(x1, Complex(x2, y2), k); };

  double best_val = -std::numeric_limits<double>::infinity();
  double bx1 = 0.0, bx2 = 0.0, by2 = 0.0;
  int converged = 0;
  constexpr double kStartDepth[5] = {0.1, 0.5, 2.0, 5.0, 10.0};
  for (int s = 0; s < 5; ++s) {
    double x1 = -kStartDepth[s] * target;
    const double theta = 2.0 * kPi * s / 5.0 + 0.3;
    double x2 = 0.5 * std::sqrt(-2.0 * x1) * std::cos(theta);
    double y2 = 0.5 * std::sqrt(-2.0 * x1) * std::sin(theta);
    bool done = false;
    for (int sweep = 0; sweep < 200 && !done; ++sweep) {
      const double ox1 = x1, ox2 = x2, oy2 = y2;
      const double s2 = x2 * x2 + y2 * y2;
      x1 = golden_max([&](double t) { return logp(t, x2, y2); }, -s2 / 2.0 - (k / kPi + 1.0), -s2 / 2.0);
      double room = std::sqrt(std::max(0.0, -2.0 * x1 - y2 * y2));
      x2 = golden_max([&](double t) { return logp(x1, t, y2); }, -room, room);
      room = std::sqrt(std::max(0.0, -2.0 * x1 - x2 * x2));
      y2 = golden_max([&](double t) { return logp(x1, x2, t); }, -room, room);
      const double change = std::max({std::abs(x1 - ox1), std::abs(x2 - ox2), std::abs(y2 - oy2)});
      done = change <= 1e-12 * (1.0 + std::abs(x1));
    }
    if (done) ++converged;
    const double v = logp(x1, x2, y2);
    if (v > best_val) {
      best_val = v;
      bx1 = x1;
      bx2 = x2;
      by2 = y2;
    }
  }
  if (!(std::abs(bx1 + target) <= tol * target) || !(std::hypot(bx2, by2) <= tol)) {
    throw NumericalError("maxima_locate: optimizer did not reach the maximum set within tol");
  }
  return {ModelPoint(Model::M3, {Complex(bx1, 0.0), Complex(bx2, by2)}), best_val, converged};
}

ScalingFit scaling_fit(const std::vector<int>& ks, const std::vector<LogReal>& values) {
  if (ks.size() != values.size()) throw std::invalid_argument("scaling_fit: ks and values differ in length");
  if (std::set<int>(ks.begin(), ks.end()).size() < 5) {
    throw std::invalid_argument("scaling_fit: at least 5 distinct k values are required");
  }
  const std::size_t m = ks.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (ks[i] <= 0) throw std::invalid_argument("scaling_fit: k values must be positive");
    if (values[i].sign() <= 0) throw std::invalid_argument("scaling_fit: bound values must be positive");
    xs[i] = std::log(static_cast<double>(ks[i]));
    ys[i] = values[i].log_abs();
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

ScalingFit scaling_fit(const std::vector<int>& ks, const std::function<LogReal(int)>& bound) {
  std::vector<LogReal> values;
  values.reserve(ks.size());
  for (int k : ks) values.push_back(bound(k));
  return scaling_fit(ks, values);
}

}  // namespace pbl
