#include "pbl/hermitian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace pbl {

namespace {

constexpr Complex kI{0.0, 1.0};

int expected_coords(Model model) { return model == Model::Ball ? -1 : 2; }

void check_dimension(Model model, Eigen::Index size) {
  const int expected = expected_coords(model);
  if (expected > 0 && size != expected) {
    throw std::invalid_argument(std::string(model_name(model)) +
                                " points need exactly 2 coordinates, got " +
                                std::to_string(size));
  }
  if (size < 2) {
    throw std::invalid_argument("ball points need n >= 2 coordinates, got " +
                                std::to_string(size));
  }
}

}  // namespace

const char* model_name(Model m) {
  switch (m) {
    case Model::Ball: return "ball";
    case Model::M2: return "M2";
    case Model::M3: return "M3";
  }
  return "?";
}

double hermitian_residual(const CMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::pair<int, int> signature_of(const CMatrix& m, double tol) {
  // Eigen only reads the lower triangle; symmetrize so that tiny asymmetries
  // cannot bias the result.
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  int pos = 0;
  int neg = 0;
  for (double ev : solver.eigenvalues()) {
    if (ev > tol) ++pos;
    if (ev < -tol) ++neg;
  }
  return {pos, neg};
}

HermitianForm::HermitianForm(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 2) {
    throw std::invalid_argument("Hermitian form must be a square matrix of size >= 2");
  }
  if (hermitian_residual(entries_) > kFormTolerance) {
    throw std::invalid_argument("matrix is not Hermitian");
  }
  const auto [pos, neg] = signature_of(entries_);
  if (neg != 1 || pos != dim() - 1) {
    throw std::invalid_argument("form must have signature (" + std::to_string(dim() - 1) +
                                ",1), got (" + std::to_string(pos) + "," +
                                std::to_string(neg) + ")");
  }
}

std::pair<int, int> HermitianForm::signature() const { return signature_of(entries_); }

Complex inner_product(const HermitianForm& form, const CVector& zt, const CVector& wt) {
  if (zt.size() != form.dim() || wt.size() != form.dim()) {
    throw std::invalid_argument("inner_product: vectors must have length " +
                                std::to_string(form.dim()));
  }
  return wt.dot(form.matrix() * zt);  // Eigen's dot conjugates its first operand
}

HermitianForm ball_form(int n) {
  if (n < 1) throw std::invalid_argument("ball_form: n must be positive");
  CMatrix h = CMatrix::Identity(n + 1, n + 1);
  h(n, n) = -1.0;
  return HermitianForm(std::move(h));
}

HermitianForm siegel_form() {
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 2) = -kI;
  h(1, 1) = 1.0;
  h(2, 0) = kI;
  return HermitianForm(std::move(h));
}

HermitianForm model3_form() {
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 2) = 1.0;
  h(1, 1) = 1.0;
  h(2, 0) = 1.0;
  return HermitianForm(std::move(h));
}

HermitianForm standard_form(Model model, int n) {
  if (n < 2) throw std::invalid_argument("standard_form: n >= 2 required");
  switch (model) {
    case Model::Ball: return ball_form(n);
    case Model::M2:
    case Model::M3:
      if (n != 2) {
        throw std::invalid_argument(std::string("standard_form: ") + model_name(model) +
                                    " is only defined for n = 2");
      }
      return model == Model::M2 ? siegel_form() : model3_form();
  }
  throw std::invalid_argument("standard_form: unknown model");
}

StandardForms standard_forms(int n) {
  return {standard_form(Model::Ball, n), standard_form(Model::M2, n),
          standard_form(Model::M3, n)};
}

double model_indicator(Model model, std::span<const Complex> z) {
  switch (model) {
    case Model::Ball: {
      double s = -1.0;
      for (const Complex& c : z) s += std::norm(c);
      return s;
    }
    case Model::M2:
      // i z1 - i conj(z1) + |z2|^2
      return -2.0 * z[0].imag() + std::norm(z[1]);
    case Model::M3:
      return 2.0 * z[0].real() + std::norm(z[1]);
  }
  return 0.0;
}

ModelPoint::ModelPoint(Model model, CVector coords) : model_(model), coords_(std::move(coords)) {
  check_dimension(model_, coords_.size());
  const double ind = model_indicator(model_, std::span<const Complex>(coords_.data(), coords_.size()));
  if (!(ind < 0.0)) {
    throw std::domain_error(std::string("point is not interior to the ") + model_name(model_) +
                            " model (indicator " + std::to_string(ind) + ")");
  }
}

ModelPoint::ModelPoint(Model model, std::initializer_list<Complex> coords)
    : ModelPoint(model, CVector(Eigen::Map<const CVector>(coords.begin(),
                                                          static_cast<Eigen::Index>(coords.size())))) {}

CVector ModelPoint::lift() const {
  CVector out(coords_.size() + 1);
  out.head(coords_.size()) = coords_;
  out[coords_.size()] = 1.0;
  return out;
}

CVector lift(const ModelPoint& p) { return p.lift(); }

double model_indicator(const ModelPoint& p) {
  return model_indicator(p.model(), std::span<const Complex>(p.coords().data(), p.coords().size()));
}

HermitianForm form_of(const ModelPoint& p) { return standard_form(p.model(), p.n()); }

}  // namespace pbl
