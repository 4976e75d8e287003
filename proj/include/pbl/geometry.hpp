#pragma once

#include "pbl/hermitian.hpp"
#include "pbl/log_real.hpp"

namespace pbl {

/// <z~, w~> under the standard form of `model`, for affine coordinates z, w.
Complex model_pairing(Model model, const CVector& z, const CVector& w);

/// cosh^2(d(z,w)/2) = <z~,w~><w~,z~> / (<z~,z~><w~,w~>), clamped below at 1.
/// Both points must belong to the same model (std::invalid_argument otherwise).
double cosh2_half_distance(const ModelPoint& z, const ModelPoint& w);

/// 2 arccosh(sqrt(c)), evaluated without cancellation near c = 1.
double distance_from_cosh2(double c);

/// Hyperbolic distance; the metric normalized so that the cosh^2 relation above holds.
double distance(const ModelPoint& z, const ModelPoint& w);

/// The constant c_n = 4 pi / n! in vol B(z, r) = c_n sinh^{2n}(r/2).
double ball_volume_constant(int n);

/// c_n sinh^{2n}(r/2). Throws std::invalid_argument unless n >= 2 and r >= 0.
double ball_volume(int n, double r);
double ball_volume(int n, double r, double c_n);

/// (-<z~,z~>)^k: (1 - |z|^2)^k on the ball, (-2 Re z1 - |z2|^2)^k on M3.
/// Throws std::invalid_argument for k < 1.
LogReal petersson_norm_factor(const ModelPoint& p, int k);

/// log P(z) for P(z) = (-2 x1 - |z2|^2)^k e^{4 pi x1}, where x1 = Re z1.
/// -infinity outside the M3 domain.
double log_petersson_objective(double x1, Complex z2, int k);

/// P(z) for an interior M3 point (std::invalid_argument for other models).
LogReal petersson_objective(const ModelPoint& p, int k);

/// Determinant of the curvature form -(i/2pi) dd-bar log(1 - |z|^2) relative
/// to the hyperbolic metric -2i dd-bar log(1 - |z|^2), at a ball point.
/// The Levi form is computed by central differences with step h (Richardson
/// extrapolated when the h and h/2 estimates disagree by more than 1e-5);
/// the metric is analytic. Throws std::domain_error when the stencil would
/// leave the ball.
double curvature_determinant(const ModelPoint& z, double h = 1e-4);

}  // namespace pbl
