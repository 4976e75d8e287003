#include "pbl/counting.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pbl/bounds.hpp"
#include "pbl/errors.hpp"
#include "pbl/geometry.hpp"

namespace pbl {
namespace {

constexpr double kPi = std::numbers::pi;

ModelPoint on_maximum_set(int k, double y1 = 0.0) {
  return ModelPoint(Model::M3, {Complex(-k / (4.0 * kPi), y1), 0.0});
}

TEST(Counting, IdentityListCountsOne) {
  const OrbitSource src(std::vector<Isometry>{Isometry::identity(Model::Ball, 2)});
  const ModelPoint z(Model::Ball, {0.1, 0.2});
  for (double d : {0.0, 0.5, 3.0}) EXPECT_EQ(counting_function(src, z, z, d), 1);
}

TEST(Counting, LatticeAtZeroRadius) {
  const OrbitSource src(LatticeSpec::gaussian());
  const ModelPoint z = on_maximum_set(6);
  EXPECT_EQ(counting_function(src, z, z, 0.0), 1);
}

TEST(Counting, MatchesMatrixBruteForce) {
  const OrbitSource src(LatticeSpec::gaussian());
  const ModelPoint z = on_maximum_set(6);
  const oracle::Vec3 zt(z[0], z[1], 1.0);
  for (double d : {0.0, 1.0, 2.0, 2.75}) {
    EXPECT_EQ(counting_function(src, z, z, d), oracle::brute_count(zt, d, 12)) << "delta " << d;
  }
}

TEST(Counting, DistinctPointsMatchBruteForce) {
  const OrbitSource src(LatticeSpec::gaussian());
  const ModelPoint z(Model::M3, {Complex(-1.2, 0.3), Complex(0.2, -0.1)});
  const ModelPoint w(Model::M3, {Complex(-0.9, -0.7), Complex(-0.3, 0.4)});
  const oracle::Vec3 zt(z[0], z[1], 1.0), wt(w[0], w[1], 1.0);
  for (double d : {0.5, 1.5, 2.5, 3.0}) {
    long long brute = 0;
    for (int m = -12; m <= 12; ++m)
      for (int n = -12; n <= 12; ++n)
        for (int l = -12; l <= 12; ++l) {
          const oracle::Vec3 gw = oracle::act(oracle::m3(oracle::C(m, n), l), wt);
          if (oracle::distance_from_cosh2(oracle::cosh2(oracle::h3(), zt, gw)) <= d) ++brute;
        }
    EXPECT_EQ(counting_function(src, z, w, d), brute) << "delta " << d;
  }
}

TEST(Counting, MonotoneInDelta) {
  const OrbitSource src(LatticeSpec::gaussian());
  const ModelPoint z = on_maximum_set(10);
  long long prev = 0;
  for (double d = 0.0; d <= 5.0; d += 0.25) {
    const long long c = counting_function(src, z, z, d);
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(Counting, CertifiedBoxContainsHits) {
  const ModelPoint z = on_maximum_set(6);
  const LatticeBox box = certified_box(z, z, 3.0);
  for (const OrbitHit& h : orbit_hits(OrbitSource(LatticeSpec::gaussian()), z, z, 3.0)) {
    EXPECT_LE(std::hypot(static_cast<double>(h.m), static_cast<double>(h.n)), box.R_alpha);
    EXPECT_LE(std::abs(static_cast<double>(h.l)), box.R_beta);
  }
}

TEST(Counting, BudgetExhaustionCarriesLowerBound) {
  CountOptions opts;
  opts.max_candidates = 50;
  const ModelPoint z = on_maximum_set(6);
  try {
    counting_function(OrbitSource(LatticeSpec::gaussian()), z, z, 6.0, opts);
    FAIL() << "expected CertificationError";
  } catch (const CertificationError& e) {
    EXPECT_GE(e.lower_bound(), 1);
    EXPECT_LE(e.lower_bound(), counting_function(OrbitSource(LatticeSpec::gaussian()), z, z, 6.0));
  }
}

TEST(Counting, RequiresMatchingModels) {
  const OrbitSource src(LatticeSpec::gaussian());
  const ModelPoint b(Model::Ball, {0.0, 0.0});
  EXPECT_THROW(counting_function(src, b, b, 1.0), std::invalid_argument);
  EXPECT_THROW(counting_function(src, on_maximum_set(6), on_maximum_set(6), -1.0), std::invalid_argument);
}

TEST(UpperBound, Examples) {
  EXPECT_NEAR(counting_upper_bound(2, 1.0, 1.0),
              2.0 * kPi * std::pow(std::sinh(0.75), 4) / std::pow(std::sinh(0.25), 4), 1e-9);
  EXPECT_NEAR(counting_upper_bound(2, 1.0, 1.0), 705.53, 0.01);
  EXPECT_NEAR(counting_upper_bound(3, 0.7, 0.0), 4.0 * kPi / 6.0, 1e-13);
  EXPECT_LT(counting_upper_bound(2, 1.0, 1.0), counting_upper_bound(2, 1.0, 1.1));
  EXPECT_GT(counting_upper_bound(2, 1.0, 1.0), counting_upper_bound(2, 1.2, 1.0));
  EXPECT_THROW(counting_upper_bound(2, 0.0, 1.0), std::invalid_argument);
}

TEST(UpperBound, DominatesLatticeCounts) {
  const OrbitSource src(LatticeSpec::gaussian());
  for (int k : {6, 12}) {
    const ModelPoint z = on_maximum_set(k);
    const double rx = local_injectivity_radius(src, z);
    for (double d = 0.0; d <= 4.0; d += 0.25) {
      EXPECT_LE(static_cast<double>(counting_function(src, z, z, d)), counting_upper_bound(2, rx, d));
    }
  }
}

TEST(Injectivity, LocalRadiusOnMaximumSet) {
  // On the maximum set the nearest elements are beta = +-1 at alpha = 0.
  const double a = 6.0 / (2.0 * kPi);
  const double expected = distance_from_cosh2(1.0 + 1.0 / (a * a));
  EXPECT_NEAR(local_injectivity_radius(OrbitSource(LatticeSpec::gaussian()), on_maximum_set(6)), expected, 1e-12);
  EXPECT_NEAR(expected, 1.8287, 1e-4);
}

TEST(Injectivity, ExplicitListSkipsIdentity) {
  const Isometry g = stabilizer_matrix({0.0, 2.0}, Model::M3);
  const OrbitSource src(std::vector<Isometry>{Isometry::identity(Model::M3, 2), g});
  const ModelPoint z = on_maximum_set(6);
  EXPECT_NEAR(local_injectivity_radius(src, z), distance(z, apply(g, z)), 1e-14);
}

TEST(Injectivity, SliceMinimumNotAboveCentre) {
  const double u = 6.0 / (2.0 * kPi);
  const SliceRadius s = slice_injectivity_radius(LatticeSpec::gaussian(), u);
  EXPECT_LE(s.radius, local_injectivity_radius(OrbitSource(LatticeSpec::gaussian()), on_maximum_set(6)) + 1e-12);
  EXPECT_GT(s.radius, 0.0);
}

TEST(TailBound, BallTermExample) {
  // The integral of e^{-rho} against the counting bound diverges; the ball
  // term is still the printed expression.
  const OrbitSource src(LatticeSpec::gaussian());
  const ModelPoint z = on_maximum_set(6);
  const TailBound t = tail_bound([](double r) { return std::exp(-r); }, 2, 1.0, 0.75, src, z, z);
  EXPECT_NEAR(t.ball_term, std::exp(-0.75) * 2.0 * kPi * std::pow(std::sinh(5.0 / 8.0), 4) /
                               std::pow(std::sinh(0.25), 4), 1e-9);
  EXPECT_TRUE(std::isinf(t.integral_term));
}

TEST(TailBound, DominatesSeries) {
  const OrbitSource src(LatticeSpec::gaussian());
  const int k = 6;
  const ModelPoint z = on_maximum_set(k);
  const double rx = local_injectivity_radius(src, z);
  auto f = [k](double r) { return std::pow(std::cosh(r / 2.0), -k); };
  const double series = cusp_lattice_sum(k, LatticeSpec::gaussian(), 1e-8).value.value();
  const double near = truncated_series(f, src, z, z, 2.0);
  const TailBound t = tail_bound(f, 2, rx, 2.0, src, z, z);
  EXPECT_TRUE(std::isfinite(t.total));
  EXPECT_NEAR(t.near_sum, near, 1e-15);
  EXPECT_GE(t.total, series);
  EXPECT_GE(t.ball_term + t.integral_term, series - near);
}

TEST(TailBound, TailTermsShrinkWithDelta) {
  const OrbitSource src(LatticeSpec::gaussian());
  const ModelPoint z = on_maximum_set(8);
  auto f = [](double r) { return std::pow(std::cosh(r / 2.0), -8); };
  double prev_ball = INFINITY, prev_int = INFINITY;
  for (double d = 2.0; d <= 12.0; d += 2.0) {
    const TailBound t = tail_bound(f, 2, 1.0, d, src, z, z);
    EXPECT_LT(t.ball_term, prev_ball);
    EXPECT_LT(t.integral_term, prev_int);
    prev_ball = t.ball_term;
    prev_int = t.integral_term;
  }
}

TEST(TailBound, Preconditions) {
  const OrbitSource src(LatticeSpec::gaussian());
  const ModelPoint z = on_maximum_set(6);
  auto f = [](double r) { return std::exp(-4.0 * r); };
  EXPECT_THROW(tail_bound(f, 2, 2.0, 1.0, src, z, z), std::invalid_argument);
  EXPECT_THROW(tail_bound([](double r) { return r; }, 2, 1.0, 2.0, src, z, z), std::invalid_argument);
  EXPECT_THROW(tail_bound([](double r) { return 2.0 + std::sin(r); }, 2, 1.0, 2.0, src, z, z),
               std::invalid_argument);
}

}  // namespace
}  // namespace pbl
