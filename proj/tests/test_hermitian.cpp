#include "pbl/hermitian.hpp"

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace pbl {
namespace {

const Complex I(0.0, 1.0);

TEST(HermitianForm, RejectsNonHermitian) {
  CMatrix m = CMatrix::Identity(3, 3);
  m(0, 1) = 1.0;
  EXPECT_THROW(HermitianForm{m}, std::invalid_argument);
}

TEST(HermitianForm, RejectsWrongSignature) {
  EXPECT_THROW(HermitianForm{CMatrix::Identity(3, 3)}, std::invalid_argument);
  CMatrix two_negative = CMatrix::Identity(3, 3);
  two_negative(1, 1) = two_negative(2, 2) = -1.0;
  EXPECT_THROW(HermitianForm{two_negative}, std::invalid_argument);
  EXPECT_THROW(HermitianForm{CMatrix::Identity(2, 3)}, std::invalid_argument);
}

TEST(StandardForms, MatchLiteralMatrices) {
  const StandardForms f = standard_forms(2);
  EXPECT_EQ(f.ball.matrix(), CMatrix(oracle::ball3()));
  EXPECT_EQ(f.m2.matrix(), CMatrix(oracle::h2()));
  EXPECT_EQ(f.m3.matrix(), CMatrix(oracle::h3()));
  for (const HermitianForm* h : {&f.ball, &f.m2, &f.m3}) EXPECT_EQ(h->signature(), std::make_pair(2, 1));
}

TEST(StandardForms, BallInHigherDimension) {
  const HermitianForm h = ball_form(4);
  EXPECT_EQ(h.dim(), 5);
  EXPECT_EQ(h.signature(), std::make_pair(4, 1));
  EXPECT_EQ(h.matrix()(4, 4), Complex(-1.0));
  for (int i = 0; i < 4; ++i) EXPECT_EQ(h.matrix()(i, i), Complex(1.0));
}

TEST(StandardForms, SiegelModelsOnlyInDimensionTwo) {
  EXPECT_THROW(standard_forms(3), std::invalid_argument);
  EXPECT_THROW(standard_form(Model::M3, 4), std::invalid_argument);
  EXPECT_THROW(standard_form(Model::M2, 3), std::invalid_argument);
  EXPECT_THROW(ball_form(0), std::invalid_argument);
}

TEST(InnerProduct, Examples) {
  CVector o(3);
  o << 0, 0, 1;
  EXPECT_EQ(inner_product(ball_form(2), o, o), Complex(-1.0));

  CVector z(3);
  z << -1.0, 0.0, 1.0;
  EXPECT_EQ(inner_product(model3_form(), z, z), Complex(-2.0));

  CVector w(3);
  w << I, 0.0, 1.0;
  EXPECT_NEAR(std::abs(inner_product(siegel_form(), w, w) - Complex(-2.0)), 0.0, 1e-15);
}

TEST(InnerProduct, ConjugateSymmetricAndRealOnDiagonal) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (const HermitianForm& h : {ball_form(2), siegel_form(), model3_form()}) {
    for (int t = 0; t < 200; ++t) {
      CVector z(3), w(3);
      for (int i = 0; i < 3; ++i) {
        z[i] = Complex(g(rng), g(rng));
        w[i] = Complex(g(rng), g(rng));
      }
      EXPECT_NEAR(std::abs(inner_product(h, z, w) - std::conj(inner_product(h, w, z))), 0.0, 1e-13);
      EXPECT_LT(std::abs(inner_product(h, z, z).imag()), 1e-14);
    }
  }
}

TEST(InnerProduct, DimensionMismatchThrows) {
  EXPECT_THROW(inner_product(ball_form(2), CVector::Zero(2), CVector::Zero(3)), std::invalid_argument);
}

TEST(ModelPoint, LiftAppendsOne) {
  const CVector l = lift(ModelPoint(Model::M3, {-1.0, 0.5}));
  ASSERT_EQ(l.size(), 3);
  EXPECT_EQ(l[0], Complex(-1.0));
  EXPECT_EQ(l[1], Complex(0.5));
  EXPECT_EQ(l[2], Complex(1.0));
  const CVector b = lift(ModelPoint(Model::Ball, {0.1, 0.2, 0.3}));
  ASSERT_EQ(b.size(), 4);
  EXPECT_EQ(b[3], Complex(1.0));
  EXPECT_EQ(lift(ModelPoint(Model::Ball, {0.0, 0.0})), (CVector(3) << 0, 0, 1).finished());
}

TEST(ModelPoint, IndicatorExamples) {
  EXPECT_EQ(model_indicator(ModelPoint(Model::Ball, {0.0, 0.0})), -1.0);
  EXPECT_EQ(model_indicator(ModelPoint(Model::M3, {-1.0, 0.0})), -2.0);
  EXPECT_EQ(model_indicator(ModelPoint(Model::M2, {2.0 * I, 1.0})), -3.0);
}

TEST(ModelPoint, RejectsBoundaryAndExterior) {
  EXPECT_THROW(ModelPoint(Model::Ball, {1.0, 0.0}), std::domain_error);
  EXPECT_THROW(ModelPoint(Model::Ball, {0.8, 0.8}), std::domain_error);
  EXPECT_THROW(ModelPoint(Model::M3, {0.0, 0.0}), std::domain_error);
  EXPECT_THROW(ModelPoint(Model::M2, {I * 0.5, 1.0}), std::domain_error);
  EXPECT_THROW(ModelPoint(Model::M3, {-1.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(ModelPoint(Model::Ball, {0.1}), std::invalid_argument);
}

TEST(ModelPoint, MembershipAgreesWithClosedForms) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (Model m : {Model::Ball, Model::M2, Model::M3}) {
    for (int t = 0; t < 10000; ++t) {
      const Complex z[2] = {{u(rng), u(rng)}, {u(rng), u(rng)}};
      bool inside = false;
      switch (m) {
        case Model::Ball: inside = std::norm(z[0]) + std::norm(z[1]) < 1.0; break;
        case Model::M2: inside = 2.0 * z[0].imag() - std::norm(z[1]) > 0.0; break;
        case Model::M3: inside = 2.0 * z[0].real() + std::norm(z[1]) < 0.0; break;
      }
      EXPECT_EQ(model_indicator(m, z) < 0.0, inside);
    }
  }
}

}  // namespace
}  // namespace pbl
