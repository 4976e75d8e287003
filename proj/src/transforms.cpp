#include "pbl/transforms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pbl {

namespace {

constexpr Complex kI{0.0, 1.0};

double form_residual(const CMatrix& mat, const CMatrix& src, const CMatrix& dst) {
  return (mat.adjoint() * src * mat - dst).cwiseAbs().maxCoeff();
}

}  // namespace

double verify_isometry(const CMatrix& mat, const HermitianForm& src, const HermitianForm& dst) {
  if (mat.rows() != mat.cols() || mat.rows() != src.dim() || src.dim() != dst.dim()) {
    throw std::invalid_argument("verify_isometry: matrix and forms must share dimension " +
                                std::to_string(src.dim()));
  }
  return form_residual(mat, src.matrix(), dst.matrix());
}

Blocks blocks_of(const CMatrix& mat) {
  const Eigen::Index n = mat.rows() - 1;
  return Blocks{mat.topLeftCorner(n, n), mat.topRightCorner(n, 1),
                mat.bottomLeftCorner(1, n), mat(n, n)};
}

Isometry::Isometry(CMatrix mat, Model model) : mat_(std::move(mat)), model_(model) {
  if (mat_.rows() != mat_.cols()) throw std::invalid_argument("Isometry: matrix must be square");
  const HermitianForm h = standard_form(model_, n());
  const double res = form_residual(mat_, h.matrix(), h.matrix());
  if (res > kIsometryTolerance) {
    throw std::invalid_argument("Isometry: matrix does not preserve the " +
                                std::string(model_name(model_)) + " form (residual " +
                                std::to_string(res) + ")");
  }
  const double det_err = std::abs(std::abs(mat_.determinant()) - 1.0);
  if (det_err > kIsometryTolerance) {
    throw std::invalid_argument("Isometry: |det| differs from 1 by " + std::to_string(det_err));
  }
}

Isometry Isometry::identity(Model model, int n) {
  standard_form(model, n);  // validates (model, n)
  return Isometry(CMatrix::Identity(n + 1, n + 1), model, Unchecked{});
}

Isometry Isometry::inverse() const {
  // g^{-1} = H^{-1} g^* H for g preserving H.
  const CMatrix h = form().matrix();
  return Isometry(CMatrix(h.inverse() * mat_.adjoint() * h), model_, Unchecked{});
}

Isometry operator*(const Isometry& g, const Isometry& h) {
  if (g.model_ != h.model_ || g.mat_.rows() != h.mat_.rows()) {
    throw std::invalid_argument("cannot compose isometries of different models");
  }
  return Isometry(CMatrix(g.mat_ * h.mat_), g.model_, Isometry::Unchecked{});
}

CayleyMap::CayleyMap(CMatrix mat, Model source_model, Model target_model)
    : mat_(std::move(mat)), source_(source_model), target_(target_model) {
  const double res = verify_isometry(mat_, source_form(), target_form());
  if (res > kFormTolerance) {
    throw std::invalid_argument("CayleyMap: M^* F_src M != F_dst (residual " +
                                std::to_string(res) + ")");
  }
}

CayleyMap CayleyMap::inverse() const { return CayleyMap(mat_.inverse(), target_, source_); }

CayleyMap cayley_gamma3() {
  CMatrix m(3, 3);
  m << 1, 1, 0,
       0, 1, -1,
       1, 1, -1;
  return CayleyMap(std::move(m), Model::Ball, Model::M3);
}

CayleyMap cayley_gamma23() {
  CMatrix m = CMatrix::Identity(3, 3);
  m(0, 0) = kI;
  return CayleyMap(std::move(m), Model::M3, Model::M2);
}

CayleyMap cayley_gamma2() {
  return CayleyMap(cayley_gamma3().matrix() * cayley_gamma23().matrix(), Model::Ball, Model::M2);
}

CVector fractional_linear(const CMatrix& mat, const CVector& z) {
  const Eigen::Index n = mat.rows() - 1;
  if (mat.cols() != n + 1 || z.size() != n) {
    throw std::invalid_argument("fractional_linear: dimension mismatch");
  }
  const Complex den = (mat.bottomLeftCorner(1, n) * z)(0) + mat(n, n);
  if (den == Complex(0.0, 0.0) || !std::isfinite(std::abs(den))) {
    throw std::domain_error("fractional_linear: C z + D vanishes; point outside the map's domain");
  }
  return (mat.topLeftCorner(n, n) * z + mat.topRightCorner(n, 1)) / den;
}

ModelPoint apply(const Isometry& g, const ModelPoint& p) {
  if (p.model() != g.model() || p.n() != g.n()) {
    throw std::invalid_argument(std::string("apply: isometry of the ") + model_name(g.model()) +
                                " model applied to a " + model_name(p.model()) + " point");
  }
  return ModelPoint(p.model(), fractional_linear(g.matrix(), p.coords()));
}

ModelPoint apply(const CayleyMap& g, const ModelPoint& p) {
  if (p.model() != g.from()) {
    throw std::invalid_argument(std::string("apply: Cayley map accepts ") + model_name(g.from()) +
                                " points, got a " + model_name(p.model()) + " point");
  }
  return ModelPoint(g.to(), fractional_linear(g.matrix(), p.coords()));
}

CMatrix matrix_exponential(const CMatrix& x) {
  const double norm = x.cwiseAbs().rowwise().sum().maxCoeff();  // infinity norm
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMatrix scaled = x / std::ldexp(1.0, squarings);

  const Eigen::Index d = x.rows();
  CMatrix result = CMatrix::Identity(d, d);
  CMatrix term = CMatrix::Identity(d, d);
  for (int j = 1; j <= 18; ++j) {
    term = term * scaled / static_cast<double>(j);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

CMatrix random_lie_algebra_element(const HermitianForm& form, std::mt19937_64& rng, double scale) {
  const int d = form.dim();
  std::normal_distribution<double> normal(0.0, scale);
  CMatrix s(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) s(i, j) = Complex(normal(rng), normal(rng));
  }
  s = (0.5 * (s - s.adjoint())).eval();  // anti-Hermitian; eval() avoids adjoint aliasing
  // X = F^{-1} S satisfies X^* F + F X = -S + S = 0; its trace is imaginary,
  // so removing it keeps X in the algebra.
  CMatrix x = form.matrix().inverse() * s;
  x -= (x.trace() / static_cast<double>(d)) * CMatrix::Identity(d, d);
  return x;
}

Isometry random_isometry(Model model, int n, std::mt19937_64& rng, double scale) {
  const HermitianForm f = standard_form(model, n);
  return Isometry(matrix_exponential(random_lie_algebra_element(f, rng, scale)), model);
}

Isometry random_isometry(Model model, int n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  return random_isometry(model, n, rng, scale);
}

}  // namespace pbl
