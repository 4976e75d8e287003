#pragma once

#include <functional>

#include "pbl/log_real.hpp"

namespace pbl {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // Kronrod-minus-Gauss estimate, summed over subintervals
  int evaluations = 0;
};

using RealFunction = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Throws
/// NumericalError if the tolerance is not met within the subdivision budget.
QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Integral over [a, inf) via x = a + scale * t / (1 - t). `scale` should be
/// the width over which f decays.
QuadratureResult integrate_to_infinity(const RealFunction& f, double a, double scale,
                                       const QuadratureOptions& opts = {});

/// Integral of exp(log_f) over [a, inf), with the integrand's peak factored out
/// before integrating so that magnitudes far outside double range work.
LogReal integrate_log_to_infinity(const RealFunction& log_f, double a, double scale,
                                  const QuadratureOptions& opts = {});

/// Integral of exp(log_f) over the real line, split at `center`.
LogReal integrate_log_real_line(const RealFunction& log_f, double center, double scale,
                                const QuadratureOptions& opts = {});

}  // namespace pbl
