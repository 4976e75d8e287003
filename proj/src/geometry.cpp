#include "pbl/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pbl {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_same_model(const ModelPoint& z, const ModelPoint& w) {
  if (z.model() != w.model() || z.n() != w.n()) {
    throw std::invalid_argument(std::string("distance between points of different models (") +
                                model_name(z.model()) + " vs " + model_name(w.model()) + ")");
  }
}

// Real Hessian of f(x) = log(1 - |x|^2) on R^{2n}, coordinates ordered
// (Re z_1..Re z_n, Im z_1..Im z_n), by the 4-point stencil.
Eigen::MatrixXd real_hessian(const CVector& z, double h) {
  const Eigen::Index n = z.size();
  Eigen::VectorXd x(2 * n);
  x << z.real(), z.imag();
  auto f = [](const Eigen::VectorXd& v) { return std::log1p(-v.squaredNorm()); };
  Eigen::MatrixXd hess(2 * n, 2 * n);
  for (Eigen::Index a = 0; a < 2 * n; ++a) {
    for (Eigen::Index b = a; b < 2 * n; ++b) {
      Eigen::VectorXd pp = x, pm = x, mp = x, mm = x;
      pp[a] += h; pp[b] += h;
      pm[a] += h; pm[b] -= h;
      mp[a] -= h; mp[b] += h;
      mm[a] -= h; mm[b] -= h;
      hess(a, b) = hess(b, a) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
    }
  }
  return hess;
}

// d^2 f / dz_i dzbar_j from the real Hessian.
CMatrix levi_form(const Eigen::MatrixXd& hess, Eigen::Index n) {
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double xx = hess(i, j), yy = hess(n + i, n + j);
      const double xy = hess(i, n + j), yx = hess(n + i, j);
      out(i, j) = 0.25 * Complex(xx + yy, xy - yx);
    }
  }
  return out;
}

}  // namespace

Complex model_pairing(Model model, const CVector& z, const CVector& w) {
  switch (model) {
    case Model::Ball: return w.dot(z) - 1.0;
    case Model::M2: return kI * z[0] + z[1] * std::conj(w[1]) - kI * std::conj(w[0]);
    case Model::M3: return z[0] + z[1] * std::conj(w[1]) + std::conj(w[0]);
  }
  return 0.0;
}

double cosh2_half_distance(const ModelPoint& z, const ModelPoint& w) {
  require_same_model(z, w);
  const Complex zw = model_pairing(z.model(), z.coords(), w.coords());
  const double zz = model_indicator(z);
  const double ww = model_indicator(w);
  const double c = std::norm(zw) / (zz * ww);
  return c < 1.0 ? 1.0 : c;
}

double distance_from_cosh2(double c) {
  if (!(c >= 1.0)) c = 1.0;
  const double t = std::sqrt(c) - 1.0;
  return 2.0 * std::log1p(t + std::sqrt(t * (t + 2.0)));
}

double distance(const ModelPoint& z, const ModelPoint& w) {
  return distance_from_cosh2(cosh2_half_distance(z, w));
}

double ball_volume_constant(int n) {
  return 4.0 * std::numbers::pi / std::tgamma(static_cast<double>(n) + 1.0);
}

double ball_volume(int n, double r, double c_n) {
  if (n < 2) throw std::invalid_argument("ball_volume: n >= 2 required");
  if (!(r >= 0.0)) throw std::invalid_argument("ball_volume: r >= 0 required");
  return c_n * std::pow(std::sinh(0.5 * r), 2 * n);
}

double ball_volume(int n, double r) { return ball_volume(n, r, ball_volume_constant(n)); }

LogReal petersson_norm_factor(const ModelPoint& p, int k) {
  if (k < 1) throw std::invalid_argument("petersson_norm_factor: k >= 1 required");
  return LogReal::from_log(k * std::log(-model_indicator(p)));
}

double log_petersson_objective(double x1, Complex z2, int k) {
  const double height = -2.0 * x1 - std::norm(z2);
  if (!(height > 0.0)) return -std::numeric_limits<double>::infinity();
  return k * std::log(height) + 4.0 * std::numbers::pi * x1;
}

LogReal petersson_objective(const ModelPoint& p, int k) {
  if (p.model() != Model::M3) {
    throw std::invalid_argument("petersson_objective is defined on M3 points");
  }
  if (k < 1) throw std::invalid_argument("petersson_objective: k >= 1 required");
  return LogReal::from_log(log_petersson_objective(p[0].real(), p[1], k));
}

double curvature_determinant(const ModelPoint& z, double h) {
  if (z.model() != Model::Ball) {
    throw std::invalid_argument("curvature_determinant expects a ball point");
  }
  if (!(h > 0.0)) throw std::invalid_argument("curvature_determinant: step must be positive");
  const CVector& c = z.coords();
  const Eigen::Index n = c.size();
  if (c.norm() + 4.0 * h >= 1.0) {
    throw std::domain_error("curvature_determinant: point too close to the boundary for step " +
                            std::to_string(h));
  }

  const double s = 1.0 - c.squaredNorm();
  // Analytic metric coefficients of -2i dd-bar log(1-|z|^2): 2 g, with
  // g_{ij} = delta_ij / s + conj(z_i) z_j / s^2.
  CMatrix metric = CMatrix::Identity(n, n) / s + c.conjugate() * c.transpose() / (s * s);
  metric *= 2.0;
  const Complex metric_det = metric.determinant();

  auto det_ratio = [&](const CMatrix& levi) {
    const CMatrix curvature = -levi / (2.0 * std::numbers::pi);
    return std::abs(curvature.determinant() / metric_det);
  };

  const CMatrix coarse = levi_form(real_hessian(c, h), n);
  const CMatrix fine = levi_form(real_hessian(c, 0.5 * h), n);
  const double d_coarse = det_ratio(coarse);
  const double d_fine = det_ratio(fine);
  if (std::abs(d_coarse - d_fine) <= 1e-5 * std::abs(d_fine)) return d_coarse;
  return det_ratio((4.0 * fine - coarse) / 3.0);
}

}  // namespace pbl
