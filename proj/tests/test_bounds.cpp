#include "pbl/bounds.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace pbl {
namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(Cocompact, TermsMatchClosedForms) {
  const ConstantModel unit{1.0, 0};
  for (int n : {2, 3}) {
    for (int k : {2 * n + 2, 20, 75}) {
      for (double r : {0.3, 1.0, 4.0}) {
        const BoundReport b = cocompact_bound(n, k, r, unit);
        ASSERT_EQ(b.terms.size(), 3u);
        EXPECT_EQ(b.terms[0].first, "identity_term");
        EXPECT_NEAR(b.term("identity_term").value(), 1.0, 1e-15);
        const double s = std::sinh(r / 4.0), c = std::cosh(r / 4.0);
        const double middle = std::pow(c / s, 2 * n) / (k - 2 * n - 1);
        const double ring = std::pow(std::sinh(5.0 * r / 8.0) / s, 2 * n) / std::pow(std::cosh(3.0 * r / 8.0), k);
        EXPECT_LT(rel(b.term("middle_term").value(), middle), 1e-12);
        EXPECT_LT(rel(b.term("ring_term").value(), ring), 1e-12);
        EXPECT_LT(rel(b.total.value(), 1.0 + middle + ring), 1e-12);
      }
    }
  }
}

TEST(Cocompact, ConstantScalesEveryTerm) {
  const BoundReport a = cocompact_bound(2, 10, 1.0, {1.0, 0});
  const BoundReport b = cocompact_bound(2, 10, 1.0, {3.0, 2});
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    EXPECT_LT(rel(b.terms[i].second.value(), 300.0 * a.terms[i].second.value()), 1e-13);
  }
  EXPECT_LT(rel(b.normalized_total.value(), a.total.value()), 1e-13);
}

TEST(Cocompact, MiddleTermDecaysLikeOneOverK) {
  const double m6 = cocompact_bound(2, 6, 1.0, {1.0, 0}).term("middle_term").value();
  const double m12 = cocompact_bound(2, 12, 1.0, {1.0, 0}).term("middle_term").value();
  EXPECT_NEAR(m6 / m12, 7.0, 1e-12);
}

TEST(Cocompact, NormalizedTotalTendsToOne) {
  double prev = INFINITY;
  for (int k : {10, 100, 1000, 10000}) {
    const double t = cocompact_bound(2, k, 2.0).normalized_total.value();
    EXPECT_GT(t, 1.0);
    EXPECT_LT(t, prev);
    prev = t;
  }
  // The middle term is coth^4(r/4)/(k-5) to leading order.
  EXPECT_NEAR(prev, 1.0 + std::pow(1.0 / std::tanh(0.5), 4) / 9995.0, 1e-9);
}

TEST(Cocompact, DecreasesWithRadius) {
  for (int k : {6, 12, 40}) {
    double prev = INFINITY;
    for (double r = 0.1; r <= 10.0; r += 0.1) {
      const double t = cocompact_bound(2, k, r).total.value();
      EXPECT_LT(t, prev) << "k " << k << " r " << r;
      prev = t;
    }
  }
}

TEST(Cocompact, Preconditions) {
  EXPECT_THROW(cocompact_bound(1, 10, 1.0), std::invalid_argument);
  EXPECT_THROW(cocompact_bound(2, 5, 1.0), std::invalid_argument);
  EXPECT_THROW(cocompact_bound(3, 7, 1.0), std::invalid_argument);
  EXPECT_THROW(cocompact_bound(2, 10, 0.0), std::invalid_argument);
  EXPECT_THROW(cocompact_bound(2, 10, 1.0, {0.0, 2}), std::invalid_argument);
}

TEST(Cocompact, HugeWeightStaysFinite) {
  const BoundReport b = cocompact_bound(2, 100000, 0.5);
  EXPECT_TRUE(std::isfinite(b.total.log_abs()));
  EXPECT_NEAR(b.total.log_abs(), std::log(1e10 * (1.0 + std::pow(1.0 / std::tanh(0.125), 4) / 99995.0)), 1e-9);
}

TEST(LatticeSum, MatchesBruteForce) {
  const double brute = oracle::brute_lattice_sum_even_k(6, 60, 600);
  const LatticeSumResult r = cusp_lattice_sum(6, LatticeSpec::gaussian(), 1e-10);
  EXPECT_LT(rel(r.value.value(), brute), 1e-8);
  EXPECT_NEAR(r.value.value(), 1.9434792638, 1e-9);
  EXPECT_LE(r.tail_bound, 1e-10 * r.value.value());
}

TEST(LatticeSum, ToleranceIsHonoured) {
  const double precise = cusp_lattice_sum(8, LatticeSpec::gaussian(), 1e-12).value.value();
  for (double tol : {1e-3, 1e-5, 1e-8}) {
    const LatticeSumResult r = cusp_lattice_sum(8, LatticeSpec::gaussian(), tol);
    EXPECT_LE(r.value.value(), precise * (1.0 + 1e-14));
    EXPECT_LE(precise - r.value.value(), tol * precise);
  }
}

TEST(LatticeSum, IndependentOfThreadCount) {
  const double one = cusp_lattice_sum(12, LatticeSpec::gaussian(), 1e-9, 1).value.value();
  const double four = cusp_lattice_sum(12, LatticeSpec::gaussian(), 1e-9, 4).value.value();
  EXPECT_EQ(one, four);
}

TEST(LatticeSum, SublatticeSumIsSmaller) {
  // 2Z[i] x 2Z is a subset of the Gaussian lattice and the summand is positive.
  for (int k : {6, 10}) {
    const double full = cusp_lattice_sum(k, LatticeSpec::gaussian(), 1e-9).value.value();
    const double sub = cusp_lattice_sum(k, LatticeSpec(2.0, Complex(0.0, 2.0), 2.0), 1e-9).value.value();
    EXPECT_LT(sub, full);
    EXPECT_GE(sub, 1.0);
  }
}

TEST(LatticeSum, IntegralMajorantDominatesSmallK) {
  for (int k : {6, 8, 12}) {
    EXPECT_GT(cusp_integral_majorant(k).value(), cusp_lattice_sum(k, LatticeSpec::gaussian(), 1e-8).value.value());
  }
  EXPECT_NEAR(cusp_integral_majorant(6).value(), 4.196, 1e-3);
}

TEST(LatticeSum, Preconditions) {
  EXPECT_THROW(cusp_lattice_sum(5, LatticeSpec::gaussian(), 1e-6), std::invalid_argument);
  EXPECT_THROW(cusp_lattice_sum(6, LatticeSpec::gaussian(), 0.0), std::invalid_argument);
  EXPECT_THROW(cusp_lattice_sum(6, LatticeSpec::gaussian(), 1e-2), std::invalid_argument);
}

TEST(GammaChain, BetaIntegral) {
  const GammaChain g = gamma_integral_chain(6);
  EXPECT_NEAR(g.beta_closed, 3.0 * kPi / 8.0, 1e-14);
  EXPECT_LT(g.beta_rel_error, 1e-12);
  // Independent Simpson check of the beta integral at k = 6 (A = 1).
  const double s = 2.0 * oracle::simpson([](double t) { return std::pow(1.0 + t * t, -3.0); }, 0.0, 200.0, 200000);
  EXPECT_NEAR(s, 3.0 * kPi / 8.0, 1e-9);
}

TEST(GammaChain, RadialIntegralIsHalfTheClosedForm) {
  for (int k : {6, 10, 40, 200}) {
    const GammaChain g = gamma_integral_chain(k);
    EXPECT_NEAR(g.r_ratio, 0.5, 1e-10) << "k " << k;
    EXPECT_NEAR((g.double_quad / g.chained).value(), 0.5, 1e-8) << "k " << k;
    EXPECT_NEAR((LogReal(g.beta_closed) * g.r_closed / g.chained).value(), 1.0, 1e-14);
  }
  EXPECT_THROW(gamma_integral_chain(4), std::invalid_argument);
}

TEST(CuspTerm, ClosedForms) {
  const double tail = std::tgamma(4.5) / (std::tgamma(3.0) * std::tgamma(5.0)) * std::pow(6.0, 1.5);
  EXPECT_LT(rel(cusp_term_factor(6, CuspTerm::Printed).value(), std::sqrt(kPi) * std::tgamma(2.0) * tail), 1e-13);
  EXPECT_LT(rel(cusp_term_factor(6, CuspTerm::Chained).value(), std::sqrt(kPi) * std::tgamma(2.5) * tail), 1e-13);
  EXPECT_NEAR(cusp_term_factor(6, CuspTerm::Printed).value(), 6.3125, 1e-4);
}

TEST(CuspTerm, HalvesWhenWeightDoubles) {
  auto normalized = [](int k) { return cusp_term_factor(k).value() / std::pow(k, 1.5); };
  EXPECT_NEAR(normalized(100) / normalized(50), 0.5, 0.05);
  // The Gamma prefactor is asymptotic to a constant times 1/k.
  EXPECT_NEAR(normalized(20000) / normalized(10000), 0.5, 1e-4);
}

TEST(Theorem3, AddsCuspTermToCocompactTerms) {
  const ConstantModel cm{2.0, 2};
  const BoundReport t = theorem3_bound(20, 1.5, cm);
  const BoundReport c = cocompact_bound(2, 20, 1.5, cm);
  ASSERT_EQ(t.terms.size(), 4u);
  EXPECT_EQ(t.terms[3].first, "cusp_term");
  EXPECT_LT(rel(t.term("cusp_term").value(), (cm.at(20) * cusp_term_factor(20)).value()), 1e-13);
  EXPECT_LT(rel(t.total.value(), (c.total + t.term("cusp_term")).value()), 1e-13);
  EXPECT_FALSE(t.lattice_alternative.has_value());
  EXPECT_THROW(theorem3_bound(5, 1.0), std::invalid_argument);
}

TEST(Theorem3, NonincreasingInRadius) {
  for (int k : {6, 20, 200}) {
    double prev = INFINITY;
    for (double r = 0.2; r <= 12.0; r += 0.2) {
      const double t = theorem3_bound(k, r).total.log_abs();
      EXPECT_LE(t, prev) << "k " << k << " r " << r;
      prev = t;
    }
  }
}

TEST(Theorem3, CuspTermDominatesLatticeAlternative) {
  Theorem3Options opts;
  opts.with_lattice_sum = true;
  for (int k : {6, 8, 12, 30}) {
    const BoundReport t = theorem3_bound(k, 1.0, {}, LatticeSpec::gaussian(), opts);
    ASSERT_TRUE(t.cusp_dominates_lattice.has_value());
    EXPECT_TRUE(*t.cusp_dominates_lattice) << "k " << k;
    EXPECT_GT(t.term("cusp_term").value(), t.lattice_alternative->value());
  }
}

TEST(Maxima, LocatedOnTheExpectedSet) {
  for (int k : {6, 20, 100}) {
    const MaximaResult m = maxima_locate(k);
    const double x1 = -k / (4.0 * kPi);
    EXPECT_LT(std::abs(m.point[0].real() - x1), 1e-6 * std::abs(x1));
    EXPECT_LT(std::abs(m.point[1]), 1e-6);
    EXPECT_GE(m.starts_converged, 1);
    EXPECT_NEAR(m.log_value, log_petersson_objective(x1, 0.0, k), 1e-9);
  }
}

TEST(Maxima, HessianIsNegativeSemidefinite) {
  const int k = 12;
  const double x1 = -k / (4.0 * kPi), h = 1e-3;
  auto f = [&](const Eigen::Vector3d& v) { return log_petersson_objective(x1 + v(0), Complex(v(1), v(2)), k); };
  Eigen::Matrix3d hess;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d ei = Eigen::Vector3d::Unit(i) * h, ej = Eigen::Vector3d::Unit(j) * h;
      hess(i, j) = (f(ei + ej) - f(ei - ej) - f(-ei + ej) + f(-ei - ej)) / (4.0 * h * h);
    }
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(hess).eigenvalues();
  EXPECT_LT(ev.maxCoeff(), 1e-6);
}

TEST(ScalingFit, RecoversPowerLaw) {
  const ScalingFit f = scaling_fit({10, 20, 40, 80, 160}, [](int k) { return LogReal(7.0 * k * k * k); });
  EXPECT_NEAR(f.slope, 3.0, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(7.0), 1e-10);
  EXPECT_LT(f.residual, 1e-12);
  const ScalingFit g = scaling_fit({5, 6, 7, 8, 9}, std::vector<LogReal>{LogReal::from_log(-5.0 * std::log(5.0)),
      LogReal::from_log(-5.0 * std::log(6.0)), LogReal::from_log(-5.0 * std::log(7.0)),
      LogReal::from_log(-5.0 * std::log(8.0)), LogReal::from_log(-5.0 * std::log(9.0))});
  EXPECT_NEAR(g.slope, -5.0, 1e-12);
}

TEST(ScalingFit, Preconditions) {
  auto one = [](int) { return LogReal::one(); };
  EXPECT_THROW(scaling_fit({1, 2, 3, 4}, one), std::invalid_argument);
  EXPECT_THROW(scaling_fit({1, 2, 3, 4, 4}, one), std::invalid_argument);
  EXPECT_THROW(scaling_fit({1, 2, 3, 4, 5}, [](int k) { return k == 3 ? LogReal::zero() : LogReal::one(); }),
               std::invalid_argument);
}

TEST(ScalingFit, CocompactSlopeApproachesExponent) {
  std::vector<int> ks;
  for (int k = 50; k <= 400; k += 10) ks.push_back(k);
  const ScalingFit f = scaling_fit(ks, [](int k) { return cocompact_bound(2, k, 8.0).total; });
  EXPECT_NEAR(f.slope, 2.0, 0.05);
}

}  // namespace
}  // namespace pbl
