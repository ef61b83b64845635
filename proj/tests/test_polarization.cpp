#include <gtest/gtest.h>

#include <cmath>

#include "lieep/polarization.hpp"
#include "test_support.hpp"

namespace lieep {
namespace {

Vector s(double x) { return Vector::Constant(1, x); }

std::vector<Vector> scalars(std::initializer_list<double> xs) {
  std::vector<Vector> out;
  for (double x : xs) out.push_back(s(x));
  return out;
}

ScalarPolynomial monomial(int degree) {
  ScalarPolynomial p;
  p.coefficients.assign(static_cast<std::size_t>(degree + 1), 0.0);
  p.coefficients.back() = 1.0;
  return p;
}

TEST(PolarizeMonomial, CubicEnergyValue) {
  const auto pol = polarize_monomial(3);
  EXPECT_EQ(pol.window, 2);
  EXPECT_DOUBLE_EQ(pol.energy(scalars({1.0, 2.0})), 3.0);
}

TEST(PolarizeMonomial, CubicGradientConsistentAtEqualArguments) {
  const auto pol = polarize_monomial(3);
  EXPECT_DOUBLE_EQ(pol.gradient(scalars({1.0, 1.0, 1.0}))(0), 3.0);
}

TEST(PolarizeMonomial, CubicDiscreteGradientIdentity) {
  const auto pol = polarize_monomial(3);
  const auto xs = scalars({1.0, 2.0, 4.0});
  const StateSpan all(xs);
  const double lhs = pol.energy(all.subspan(1, 2)) - pol.energy(all.first(2));
  const double rhs = 0.5 * (4.0 - 1.0) * pol.gradient(all)(0);
  // Ubar(2,4) = 2*6/2*4 = 24, Ubar(1,2) = 3.
  EXPECT_DOUBLE_EQ(lhs, 21.0);
  EXPECT_DOUBLE_EQ(lhs, rhs);
}

TEST(PolarizeMonomial, WindowsPerDegree) {
  EXPECT_EQ(polarize_monomial(2).window, 2);
  EXPECT_EQ(polarize_monomial(4).window, 2);
  EXPECT_EQ(polarize_monomial(5).window, 4);
  EXPECT_EQ(polarize_monomial(6).window, 3);
}

TEST(PolarizeMonomial, UnsupportedDegrees) {
  for (int d : {-1, 0, 1, 7}) {
    try {
      (void)polarize_monomial(d);
      FAIL() << d;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::unsupported_degree);
    }
  }
}

TEST(PolarizeMonomial, SexticConsistency) {
  const auto pol = polarize_monomial(6);
  const double x = 1.5;
  EXPECT_NEAR(pol.gradient(scalars({x, x, x, x}))(0), 6 * std::pow(x, 5), 1e-13);
}

TEST(ValidatePolarization, AllBuiltInMonomialsPass) {
  for (int d = 2; d <= 6; ++d) {
    const auto poly = monomial(d);
    const auto rep = validate_polarization(polarize_monomial(d), as_field(poly), as_gradient(poly), 1000);
    EXPECT_TRUE(rep.passed()) << "degree " << d;
    EXPECT_LE(rep.identity.max_rel, 1e-12) << "degree " << d;
    EXPECT_LE(rep.consistency.max_rel, 1e-12) << "degree " << d;
    EXPECT_LE(rep.energy.max_rel, 1e-12) << "degree " << d;
    EXPECT_LE(rep.affine.max_rel, 1e-13) << "degree " << d;
    EXPECT_LE(rep.permutation.max_rel, 1e-13) << "degree " << d;
    EXPECT_LE(rep.reversal.max_rel, 1e-13) << "degree " << d;
  }
}

TEST(ValidatePolarization, QuadraticThetaFamily) {
  const auto poly = monomial(2);
  for (double theta : {0.0, 0.3, 1.0}) {
    const auto rep = validate_polarization(polarize_monomial(2, theta), as_field(poly), as_gradient(poly), 200);
    EXPECT_TRUE(rep.passed()) << theta;
  }
}

TEST(ValidatePolarization, DetectsCorruptedGradient) {
  auto pol = polarize_monomial(3);
  const auto good = pol.gradient;
  pol.gradient = [good](StateSpan w) { return Vector(good(w).array() + 1e-3); };
  const auto poly = monomial(3);
  const auto rep = validate_polarization(pol, as_field(poly), as_gradient(poly), 1000);
  EXPECT_FALSE(rep.passed());
  EXPECT_GT(rep.identity.max_abs, 1e-4);
  EXPECT_LT(rep.identity.max_abs, 1e-2);
}

TEST(PolarizePolynomial, SingleCubicTermMatchesMonomial) {
  ScalarPolynomial cubic{{0.0, 0.0, 0.0, 1.0}};
  const auto a = polarize_polynomial(cubic, 2);
  const auto b = polarize_monomial(3);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<Vector> xs;
    for (int i = 0; i < 3; ++i) xs.push_back(testing::random_vector(1, 2.0, rng));
    const StateSpan all(xs);
    EXPECT_DOUBLE_EQ(a.energy(all.first(2)), b.energy(all.first(2)));
    EXPECT_DOUBLE_EQ(a.gradient(all)(0), b.gradient(all)(0));
  }
}

TEST(PolarizePolynomial, QuadraticHalfTheta) {
  ScalarPolynomial sq{{0.0, 0.0, 1.0}};
  const auto pol = polarize_polynomial(sq, 2);
  const double x = 0.7, y = -1.3;
  EXPECT_DOUBLE_EQ(pol.energy(scalars({x, y})), (x * x + y * y) / 4 + x * y / 2);
  EXPECT_DOUBLE_EQ(pol.gradient(scalars({x, x, x}))(0), 2 * x);
}

TEST(PolarizePolynomial, TruncatedCosinePotential) {
  ScalarPolynomial u{{0.0, 0.0, 0.0, 0.0, -1.0 / 24, 0.0, 1.0 / 720}};
  const auto pol = polarize_polynomial(u, 3);
  EXPECT_EQ(pol.window, 3);
  const auto rep = validate_polarization(pol, as_field(u), as_gradient(u), 1000);
  EXPECT_TRUE(rep.passed());
  EXPECT_LE(rep.identity.max_rel, 1e-11);
}

TEST(PolarizePolynomial, FullSexticLiftedToWindowFour) {
  ScalarPolynomial u{{0.3, -1.0, 0.5, 2.0, -0.25, 0.1, 0.02}};
  const auto pol = polarize_polynomial(u, 4);
  const auto rep = validate_polarization(pol, as_field(u), as_gradient(u), 1000);
  EXPECT_TRUE(rep.passed());
  EXPECT_LE(rep.permutation.max_rel, 1e-13);
}

TEST(PolarizePolynomial, WindowAndDegreeErrors) {
  ScalarPolynomial quintic{{0.0, 0.0, 0.0, 0.0, 0.0, 1.0}};
  try {
    (void)polarize_polynomial(quintic, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::window);
  }
  ScalarPolynomial septic;
  septic.coefficients.assign(8, 0.0);
  septic.coefficients[7] = 1.0;
  try {
    (void)polarize_polynomial(septic, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_degree);
  }
}

TEST(PolarizationProperties, GradientAffineInNewestArgument) {
  std::mt19937_64 rng(8);
  for (int d = 2; d <= 6; ++d) {
    const auto pol = polarize_monomial(d);
    const auto p = static_cast<std::size_t>(pol.window);
    for (int t = 0; t < 200; ++t) {
      std::vector<Vector> xs;
      for (std::size_t i = 0; i <= p; ++i) xs.push_back(testing::random_vector(1, 2.0, rng));
      const Vector z1 = testing::random_vector(1, 2.0, rng);
      const Vector z2 = testing::random_vector(1, 2.0, rng);
      auto eval = [&](const Vector& z) {
        xs[p] = z;
        return pol.gradient(xs)(0);
      };
      const double mid = eval((z1 + z2) / 2);
      const double sum = eval(z1) + eval(z2);
      EXPECT_NEAR(sum, 2 * mid, 1e-13 * (1 + std::abs(sum))) << "degree " << d;
    }
  }
}

TEST(PolarizationProperties, ReversalSymmetryOfGradient) {
  std::mt19937_64 rng(9);
  for (int d = 2; d <= 6; ++d) {
    const auto pol = polarize_monomial(d);
    for (int t = 0; t < 200; ++t) {
      std::vector<Vector> xs;
      for (int i = 0; i <= pol.window; ++i) xs.push_back(testing::random_vector(1, 2.0, rng));
      std::vector<Vector> rev(xs.rbegin(), xs.rend());
      const double g = pol.gradient(xs)(0);
      EXPECT_NEAR(pol.gradient(rev)(0), g, 1e-13 * (1 + std::abs(g)));
    }
  }
}

TEST(EmbedComponent, ActsOnSelectedComponentOnly) {
  const auto scalar = polarize_monomial(4);
  const auto pol = embed_component(scalar, 3, 1);
  std::vector<Vector> xs(3, Vector::Zero(3));
  xs[0] << 5.0, 0.5, -2.0;
  xs[1] << 7.0, -1.5, 3.0;
  xs[2] << 9.0, 2.0, 1.0;
  EXPECT_DOUBLE_EQ(pol.energy(StateSpan(xs).first(2)), 0.25 * 2.25);
  const Vector g = pol.gradient(xs);
  EXPECT_EQ(g(0), 0.0);
  EXPECT_EQ(g(2), 0.0);
  EXPECT_DOUBLE_EQ(g(1), scalar.gradient(scalars({0.5, -1.5, 2.0}))(0));
}

}  // namespace
}  // namespace lieep
