#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lieep/matfun.hpp"
#include "lieep/problems.hpp"
#include "test_support.hpp"

namespace lieep {
namespace {

using testing::random_matrix;
using testing::rel_inf_error;
using testing::shifted_exponential_series;

TEST(Expm, ZeroIsIdentity) {
  EXPECT_EQ(expm(Matrix::Zero(2, 2)), Matrix::Identity(2, 2));
}

TEST(Expm, WindRotationAtQuarterTurn) {
  const auto wind = wind_oscillator({20.0, std::numbers::pi / 2, 0.5});
  const double h = 1.0 / 20;
  const Matrix e = expm(2 * h * wind.system.J * wind.system.M);
  Matrix want(2, 2);
  want << std::cos(2.0), -std::sin(2.0), std::sin(2.0), std::cos(2.0);
  EXPECT_LT(inf_norm(Matrix(e - want)), 1e-14);
}

TEST(Expm, MatchesTaylorOracle) {
  std::mt19937_64 rng(7);
  const Matrix a = random_matrix(6, 2.0, rng);
  // 30 terms: truncation below 2^30/30! < 1e-23.
  EXPECT_LT(rel_inf_error(expm(a), shifted_exponential_series(a, 0, 30)), 1e-12);
}

TEST(Expm, LargeNormAgainstClosedForms) {
  Matrix rot(2, 2);
  rot << 0.0, -50.0, 50.0, 0.0;
  Matrix want(2, 2);
  want << std::cos(50.0), -std::sin(50.0), std::sin(50.0), std::cos(50.0);
  EXPECT_LT(rel_inf_error(expm(rot), want), 1e-13);

  Matrix diag = Matrix::Zero(3, 3);
  diag.diagonal() << -30.0, 5.0, 99.0;
  const Matrix e = expm(diag);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(e(i, i) / std::exp(diag(i, i)), 1.0, 1e-13);
  }
}

TEST(Expm, RejectsNonFiniteInput) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    (void)expm(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
  }
}

TEST(Expm, ReportsOverflowWithNorm) {
  const Matrix a = 1000.0 * Matrix::Identity(2, 2);
  try {
    (void)expm(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::overflow);
    EXPECT_NE(std::string(e.what()).find("1000"), std::string::npos);
  }
}

TEST(Expm, RejectsNonSquare) {
  EXPECT_THROW((void)expm(Matrix::Zero(2, 3)), Error);
}

TEST(Phi1, ZeroIsIdentity) {
  EXPECT_LT(inf_norm(Matrix(phi1(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3))), 1e-16);
}

TEST(Phi1, ScalarOne) {
  const Matrix one = Matrix::Constant(1, 1, 1.0);
  EXPECT_NEAR(phi1(one)(0, 0), std::numbers::e - 1.0, 1e-15);
}

TEST(Phi1, MatchesSeriesOracle) {
  std::mt19937_64 rng(11);
  const Matrix a = random_matrix(5, 1.0, rng);
  EXPECT_LT(rel_inf_error(phi1(a), shifted_exponential_series(a, 1, 30)), 1e-12);
}

TEST(Phi1, NilpotentArgument) {
  Matrix a(2, 2);
  a << 0.0, 3.0, 0.0, 0.0;
  Matrix want(2, 2);
  want << 1.0, 1.5, 0.0, 1.0;
  EXPECT_LT(inf_norm(Matrix(phi1(a) - want)), 1e-15);
}

TEST(Phi1, DefiningIdentityWithScaling) {
  std::mt19937_64 rng(5);
  for (double norm : {0.1, 3.0, 20.0}) {
    const Matrix a = random_matrix(6, norm, rng);
    const Matrix e = expm(a);
    const Matrix r = a * phi1(a) - (e - Matrix::Identity(6, 6));
    EXPECT_LT(inf_norm(r), 1e-12 * (1.0 + inf_norm(e))) << "norm " << norm;
  }
}

TEST(ExpAndPhi, ZeroStructureMatrix) {
  const auto pair = exp_and_phi(Matrix::Zero(3, 3), Matrix::Identity(3, 3), 0.5);
  EXPECT_EQ(pair.exp, Matrix::Identity(3, 3));
  EXPECT_EQ(pair.phi, Matrix::Identity(3, 3));
  EXPECT_EQ(pair.scale, 0.5);
}

TEST(ExpAndPhi, WindDissipativeClosedForm) {
  const WindOscillatorParams params{20.0, std::numbers::pi / 2 - 1e-4, 0.5};
  const auto wind = wind_oscillator(params);
  const double h = 1.0 / 20;
  const auto pair = exp_and_phi(wind.system.J, wind.system.M, 2 * h);
  const double c = std::cos(params.theta);
  const double s = std::sin(params.theta);
  const double decay = std::exp(-2 * h * c * params.r);
  Matrix want(2, 2);
  want << decay * std::cos(2 * h * s * params.r), -decay * std::sin(2 * h * s * params.r),
      decay * std::sin(2 * h * s * params.r), decay * std::cos(2 * h * s * params.r);
  EXPECT_LT(inf_norm(Matrix(pair.exp - want)), 1e-12);
}

TEST(ExpAndPhi, RandomStructurePairIdentity) {
  std::mt19937_64 rng(3);
  const Matrix j = testing::random_skew(5, 1.0, rng);
  const Matrix m = testing::random_symmetric(5, 2.0, rng);
  const auto pair = exp_and_phi(j, m, 0.1);
  EXPECT_LT(pair_identity_residual(pair, j, m), 1e-12);
}

TEST(ExpAndPhi, DimensionMismatch) {
  try {
    (void)exp_and_phi(Matrix::Zero(2, 2), Matrix::Identity(3, 3), 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::shape);
  }
}

TEST(MatfunProperties, HundredRandomMatricesAgreeWithSeries) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 8);
  std::uniform_real_distribution<double> norm(0.01, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = random_matrix(dim(rng), norm(rng), rng);
    EXPECT_LT(rel_inf_error(expm(a), shifted_exponential_series(a, 0, 40)), 1e-12);
    EXPECT_LT(rel_inf_error(phi1(a), shifted_exponential_series(a, 1, 40)), 1e-12);
  }
}

TEST(MatfunProperties, PairIdentityAndOrthogonalityForSkew) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 6;
    const Matrix j = testing::random_skew(n, 1.0, rng);
    const Matrix m = Matrix::Identity(n, n);
    const auto pair = exp_and_phi(j, m, 0.5 + trial * 0.2);
    EXPECT_LT(pair_identity_residual(pair, j, m), 1e-12);
    const Matrix orth = pair.exp.transpose() * pair.exp - Matrix::Identity(n, n);
    EXPECT_LT(inf_norm(orth), 1e-12);
  }
}

}  // namespace
}  // namespace lieep
