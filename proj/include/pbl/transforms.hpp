#pragma once

#include <cstdint>
#include <random>

#include "pbl/hermitian.hpp"

namespace pbl {

/// Tolerance of the form-preservation and unit-determinant checks performed
/// when an Isometry is constructed.
inline constexpr double kIsometryTolerance = 1e-10;

/// max |M^* src M - dst| entrywise. Throws std::invalid_argument on a
/// dimension mismatch.
double verify_isometry(const CMatrix& mat, const HermitianForm& src, const HermitianForm& dst);

/// Block partition used by the fractional-linear action g z = (A z + B)/(C z + D).
struct Blocks {
  CMatrix A;  // n x n
  CVector B;  // n x 1
  Eigen::RowVectorXcd C;  // 1 x n
  Complex D;
};

Blocks blocks_of(const CMatrix& mat);

/// An element of SU(form) acting on the model whose standard form it preserves.
class Isometry {
 public:
  /// Throws std::invalid_argument unless mat^* H mat = H (H the standard form
  /// of `model` in dimension mat.rows()-1) and |det mat| = 1, both within
  /// kIsometryTolerance.
  Isometry(CMatrix mat, Model model);

  static Isometry identity(Model model, int n);

  const CMatrix& matrix() const { return mat_; }
  Model model() const { return model_; }
  int n() const { return static_cast<int>(mat_.rows()) - 1; }
  HermitianForm form() const { return standard_form(model_, n()); }
  Blocks blocks() const { return blocks_of(mat_); }

  Isometry inverse() const;

  friend Isometry operator*(const Isometry& g, const Isometry& h);

 private:
  struct Unchecked {};
  Isometry(CMatrix mat, Model model, Unchecked) : mat_(std::move(mat)), model_(model) {}

  CMatrix mat_;
  Model model_;
};

/// A linear map between two of the n = 2 models.
///
/// Convention: the matrix M satisfies M^* source_form M = target_form, so by
/// <M z, M w>_source = <z, w>_target it carries points of the target-form
/// model to points of the source-form model. `from()` / `to()` name the
/// models in the direction points travel.
class CayleyMap {
 public:
  /// Throws std::invalid_argument if the pullback identity fails by more than
  /// kFormTolerance.
  CayleyMap(CMatrix mat, Model source_model, Model target_model);

  const CMatrix& matrix() const { return mat_; }
  HermitianForm source_form() const { return standard_form(source_, 2); }
  HermitianForm target_form() const { return standard_form(target_, 2); }

  /// Model whose points the map accepts.
  Model from() const { return target_; }
  /// Model the images live in.
  Model to() const { return source_; }

  CayleyMap inverse() const;

 private:
  CMatrix mat_;
  Model source_;
  Model target_;
};

/// [[1,1,0],[0,1,-1],[1,1,-1]]; gamma3^* H gamma3 = H3, carries M3 -> Ball.
CayleyMap cayley_gamma3();
/// diag(i,1,1); gamma23^* H3 gamma23 = H2, carries M2 -> M3.
CayleyMap cayley_gamma23();
/// gamma3 * gamma23; satisfies gamma2^* H gamma2 = H2, carries M2 -> Ball.
CayleyMap cayley_gamma2();

/// Fractional-linear action of an arbitrary matrix on affine coordinates.
/// Throws std::domain_error when C z + D vanishes.
CVector fractional_linear(const CMatrix& mat, const CVector& z);

/// g z. The point must live in g's model; throws std::invalid_argument
/// otherwise and std::domain_error if the denominator vanishes.
ModelPoint apply(const Isometry& g, const ModelPoint& p);
ModelPoint apply(const CayleyMap& g, const ModelPoint& p);

/// exp(X) by scaling and squaring with a degree-18 Taylor polynomial.
CMatrix matrix_exponential(const CMatrix& x);

/// A random element X of the Lie algebra su(form): X^* F + F X = 0, tr X = 0.
/// Entries of the underlying anti-Hermitian generator are N(0, scale^2).
CMatrix random_lie_algebra_element(const HermitianForm& form, std::mt19937_64& rng,
                                   double scale = 0.5);

/// exp of random_lie_algebra_element; deterministic for a given seed.
Isometry random_isometry(Model model, int n, std::mt19937_64& rng, double scale = 0.5);
Isometry random_isometry(Model model, int n, std::uint64_t seed, double scale = 0.5);

}  // namespace pbl
