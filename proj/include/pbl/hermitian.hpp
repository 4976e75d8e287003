#pragma once

#include <complex>
#include <span>
#include <utility>

#include <Eigen/Dense>

namespace pbl {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Tolerance for Hermitian-symmetry and signature checks on forms.
inline constexpr double kFormTolerance = 1e-12;

/// The three models of complex hyperbolic space used throughout.
///   Ball: |z|^2 < 1 under diag(Id_n, -1), any n >= 2.
///   M2:   2 Im z1 - |z2|^2 > 0 under H2 (n = 2 only).
///   M3:   2 Re z1 + |z2|^2 < 0 under H3 (n = 2 only).
enum class Model { Ball, M2, M3 };

const char* model_name(Model m);

/// A Hermitian matrix of signature (n, 1).
class HermitianForm {
 public:
  /// Throws std::invalid_argument if `entries` is not square, not Hermitian,
  /// or does not have exactly one negative eigenvalue.
  explicit HermitianForm(CMatrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& matrix() const { return entries_; }

  /// (number of positive eigenvalues, number of negative eigenvalues).
  std::pair<int, int> signature() const;

 private:
  CMatrix entries_;
};

/// Signature of an arbitrary Hermitian matrix, eigenvalues within `tol` of
/// zero counted as neither.
std::pair<int, int> signature_of(const CMatrix& m, double tol = kFormTolerance);

/// Largest entrywise deviation of `m` from its conjugate transpose.
double hermitian_residual(const CMatrix& m);

/// <z, w>_H = w^* H z.
Complex inner_product(const HermitianForm& form, const CVector& zt, const CVector& wt);

/// diag(Id_n, -1).
HermitianForm ball_form(int n);
/// [[0,0,-i],[0,1,0],[i,0,0]].
HermitianForm siegel_form();
/// [[0,0,1],[0,1,0],[1,0,0]].
HermitianForm model3_form();

/// Standard form of `model` in complex dimension n. M2 and M3 exist only for
/// n = 2; other requests throw std::invalid_argument.
HermitianForm standard_form(Model model, int n);

struct StandardForms {
  HermitianForm ball;
  HermitianForm m2;
  HermitianForm m3;
};

/// All three standard forms; n must be 2.
StandardForms standard_forms(int n);

/// <z~, z~> under the model's standard form, z~ the lift of the affine
/// coordinates. Negative exactly on the interior. No validation of sign.
double model_indicator(Model model, std::span<const Complex> coords);

/// An interior point of one of the models, stored in affine coordinates.
class ModelPoint {
 public:
  /// Throws std::invalid_argument on a dimension mismatch (M2/M3 need two
  /// coordinates, Ball at least two) and std::domain_error unless the point
  /// is strictly interior.
  ModelPoint(Model model, CVector coords);
  ModelPoint(Model model, std::initializer_list<Complex> coords);

  Model model() const { return model_; }
  int n() const { return static_cast<int>(coords_.size()); }
  const CVector& coords() const { return coords_; }
  Complex operator[](int i) const { return coords_[i]; }

  /// (z_1, ..., z_n, 1).
  CVector lift() const;

 private:
  Model model_;
  CVector coords_;
};

CVector lift(const ModelPoint& p);

/// <z~, z~> of an interior point; strictly negative.
double model_indicator(const ModelPoint& p);

/// The standard form of the point's model.
HermitianForm form_of(const ModelPoint& p);

}  // namespace pbl
