#include "pbl/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pbl/errors.hpp"

namespace pbl {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Integrate, Polynomial) {
  const QuadratureResult r = integrate([](double x) { return x * x * x - 2.0 * x; }, -1.0, 3.0);
  EXPECT_NEAR(r.value, (81.0 - 1.0) / 4.0 - (9.0 - 1.0), 1e-12);
}

TEST(Integrate, SqrtSingularityAtEndpoint) {
  const QuadratureResult r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Integrate, EmptyInterval) { EXPECT_EQ(integrate([](double) { return 1.0; }, 2.0, 2.0).value, 0.0); }

TEST(Integrate, BudgetExhaustionThrows) {
  QuadratureOptions opts;
  opts.max_subdivisions = 3;
  EXPECT_THROW(integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, opts), NumericalError);
}

TEST(HalfLine, Gaussian) {
  const QuadratureResult r = integrate_to_infinity([](double x) { return std::exp(-x * x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, std::sqrt(kPi) / 2.0, 1e-12);
}

TEST(HalfLine, AlgebraicDecay) {
  const QuadratureResult r = integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 1.0, 1.0);
  EXPECT_NEAR(r.value, kPi / 4.0, 1e-11);
}

TEST(LogDomain, PeakShiftedBeyondDoubleRange) {
  // integral of x^{k-1} e^{-x} = Gamma(k); k = 400 overflows doubles.
  const int k = 400;
  const LogReal r = integrate_log_to_infinity(
      [k](double x) { return x > 0.0 ? (k - 1) * std::log(x) - x : -INFINITY; }, 0.0, 400.0);
  EXPECT_NEAR(r.log_abs(), std::lgamma(400.0), 1e-9 * std::lgamma(400.0));
}

TEST(LogDomain, RealLine) {
  // integral of (1 + b^2)^{-3} over R = 3 pi / 8.
  const LogReal r = integrate_log_real_line([](double b) { return -3.0 * std::log1p(b * b); }, 0.0, 1.0);
  EXPECT_NEAR(r.value(), 3.0 * kPi / 8.0, 1e-12);
}

TEST(LogDomain, TinyMagnitudes) {
  // integral of e^{-1000 - x} over [0, inf) = e^{-1000}.
  const LogReal r = integrate_log_to_infinity([](double x) { return -1000.0 - x; }, 0.0, 1.0);
  EXPECT_NEAR(r.log_abs(), -1000.0, 1e-10);
}

}  // namespace
}  // namespace pbl
