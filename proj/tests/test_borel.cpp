#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "attractor/borel.hpp"
#include "attractor/dispersion.hpp"
#include "attractor/quadrature.hpp"

using namespace attractor;

namespace {

// Frozen mpmath value of int_0^inf e^-t / (1 + 0.2 t) dt.
constexpr double kLaplaceGeometric = 0.85211088142366100;

// 1/sqrt(1 + 2s) - 1 coefficients from sum C(2m,m) y^m = (1 - 4y)^(-1/2), y = -s/2.
Rational sqrt_closed_form(std::size_t m) {
  if (m == 0) return Rational(0);
  mpz_class binom;
  mpz_bin_uiui(binom.get_mpz_t(), 2 * m, m);
  const Rational mag(binom, mpz_class(mpz_class(1) << static_cast<unsigned>(m)));
  return m % 2 ? -mag : mag;
}

PadeApproximant gaussian_pade(std::size_t L = 14, std::size_t M = 14) {
  const auto b = borel_transform(ce_coefficients(WeightModel::gaussian(), L + M));
  return pade(std::span<const Rational>(b.coeffs), L, M);
}

}  // namespace

TEST(BorelTransform, SourceSeriesExamples) {
  const auto b = borel_transform(build_source_series(WeightModel::gaussian(), 3));
  EXPECT_EQ(b.b(0), Rational(0));
  EXPECT_EQ(b.b(1), Rational(-1));
  EXPECT_EQ(b.b(2), Rational(3, 2));
  EXPECT_EQ(b.b(3), Rational(-5, 2));
}

TEST(BorelTransform, FactorialInputGivesOnes) {
  CECoefficients c;
  for (std::size_t n = 1; n <= 12; ++n) c.values.emplace_back(factorial(n));
  const auto b = borel_transform(c);
  ASSERT_EQ(b.order(), 12U);
  for (std::size_t n = 1; n <= 12; ++n) EXPECT_EQ(b.b(n), Rational(1));
}

TEST(BorelTransform, SeventhGaussianCoefficient) {
  const auto b = borel_transform(ce_coefficients(WeightModel::gaussian(), 7));
  EXPECT_EQ(b.b(7), Rational(-1593, 210));
  EXPECT_EQ(b.b(7), Rational(-38232, 5040));
  EXPECT_THROW(borel_transform(CECoefficients{}), Error);
}

TEST(BorelTransform, ClosedFormThroughThirty) {
  const auto b = borel_transform(build_source_series(WeightModel::gaussian(), 30));
  for (std::size_t m = 0; m <= 30; ++m) EXPECT_EQ(b.b(m), sqrt_closed_form(m)) << "m=" << m;
}

TEST(Pade, RecoversGeometricRational) {
  const std::vector<double> s{1, -2, 4, -8, 16};
  const auto p = pade(std::span<const double>(s), 0, 1);
  ASSERT_EQ(p.denominator.size(), 2U);
  EXPECT_NEAR(p.denominator[0], 1.0, 1e-12);
  EXPECT_NEAR(p.denominator[1], 2.0, 1e-12);
  EXPECT_NEAR(p.numerator[0], 1.0, 1e-12);
  ASSERT_EQ(p.poles.size(), 1U);
  EXPECT_NEAR(p.poles[0].real(), -0.5, 1e-12);

  std::vector<Rational> q{Rational(1), Rational(-2), Rational(4), Rational(-8), Rational(16)};
  const auto pq = pade(std::span<const Rational>(q), 0, 1);
  EXPECT_TRUE(pq.exact_solve);
  EXPECT_EQ(pq.denominator[1], 2.0);
}

TEST(Pade, ConstantAtZeroZero) {
  const std::vector<double> s{3.5, 0, 0, 0};
  const auto p = pade(std::span<const double>(s), 0, 0);
  EXPECT_TRUE(p.poles.empty());
  EXPECT_EQ(p(0.7), 3.5);
  EXPECT_EQ(p(-12.0), 3.5);
}

TEST(Pade, SquareRootBranchCutPoles) {
  std::vector<Rational> s;
  for (std::size_t m = 0; m <= 29; ++m) s.push_back(sqrt_closed_form(m));
  const auto p = pade(std::span<const Rational>(s), 14, 14);
  ASSERT_EQ(p.poles.size(), 14U);
  for (const auto& z : p.poles) {
    EXPECT_NEAR(z.imag(), 0.0, 1e-9 * std::abs(z));
    EXPECT_LT(z.real(), -0.5);
  }
}

TEST(Pade, TaylorMatchesInputThroughLPlusM) {
  const auto b = borel_transform(ce_coefficients(WeightModel::gaussian(), 28));
  for (std::size_t L : {2U, 6U, 14U}) {
    const auto p = pade(std::span<const Rational>(b.coeffs), L, L);
    EXPECT_EQ(p.poles.size(), L);
    const auto t = p.taylor(2 * L);
    for (std::size_t i = 0; i <= 2 * L; ++i) {
      const double v = b.b(i).to_double();
      EXPECT_NEAR(t[i], v, 1e-8 * std::max(1.0, std::fabs(v))) << "L=" << L << " i=" << i;
    }
  }
}

TEST(Pade, SingularSystemAndShortInput) {
  // An even series has no [1/1] entry: the 1x1 Toeplitz block c_1 is zero.
  std::vector<Rational> s{Rational(1), Rational(0), Rational(1)};
  try {
    pade(std::span<const Rational>(s), 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularPadeSystem);
  }
  const std::vector<double> d{1, 0, 1};
  EXPECT_THROW(pade(std::span<const double>(d), 1, 1), Error);
  try {
    pade(std::span<const double>(d), 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
}

TEST(GaussLaguerre, IntegratesMonomialsToFactorials) {
  const auto rule = gauss_laguerre(80);
  for (int k = 0; k <= 20; ++k) {
    const double expected = std::tgamma(k + 1.0);
    EXPECT_NEAR(rule.integrate([k](double t) { return std::pow(t, k); }) / expected, 1.0, 1e-12) << "k=" << k;
  }
}

TEST(LaplaceResum, ZeroApproximant) {
  const std::vector<double> s{0, 0, 0};
  const auto p = pade(std::span<const double>(s), 2, 0);
  for (double x : {1e-3, 0.5, 10.0}) EXPECT_EQ(laplace_resum(p, x), 0.0);
}

TEST(LaplaceResum, GeometricAgainstFrozenAndAdaptiveOracle) {
  const std::vector<double> s{1, -2, 4};
  const auto p = pade(std::span<const double>(s), 0, 1);
  const double value = laplace_resum(p, 0.1);
  EXPECT_NEAR(value, kLaplaceGeometric, 1e-10);
  // Independent path: adaptive quadrature over t in [0, 60] of the same integrand.
  const double oracle = adaptive_gauss_kronrod([](double t) { return std::exp(-t) / (1.0 + 0.2 * t); }, 0.0, 60.0, 1e-15);
  EXPECT_NEAR(value, oracle, 1e-10);
  EXPECT_THROW(laplace_resum(p, 0.0), Error);
}

TEST(LaplaceResum, PoleOnContour) {
  const std::vector<double> s{1, 1, 1};  // 1/(1 - s), pole at s = 1
  const auto p = pade(std::span<const double>(s), 0, 1);
  try {
    laplace_resum(p, 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PoleOnContour);
  }
}

TEST(LaplaceResum, NearContourPoleUsesAdaptiveFallback) {
  // Pole at -0.02 + 0.01i pairs; Laguerre alone would be inaccurate here.
  PadeApproximant p;
  p.L = 0;
  p.M = 2;
  p.numerator = {1.0};
  const std::complex<double> z(-0.02, 0.01);
  p.denominator = {1.0, -2.0 * z.real() / std::norm(z), 1.0 / std::norm(z)};
  p.poles = {z, std::conj(z)};
  const double x = 0.5;
  const double oracle = adaptive_gauss_kronrod([&](double t) { return std::exp(-t) * p(x * t); }, 0.0, 80.0, 1e-15);
  EXPECT_NEAR(laplace_resum(p, x), oracle, 1e-10);
}

TEST(GaussianPade, NearestPoleAndSummability) {
  const auto p = gaussian_pade();
  ASSERT_EQ(p.poles.size(), 14U);
  EXPECT_NEAR(p.poles.front().real(), -0.5, 0.02);
  EXPECT_LT(p.nearest_pole_distance({-0.5, 0.0}), 0.02);
  for (const auto& z : p.poles) EXPECT_LT(z.real(), 0.0) << z;
}

TEST(ResumDispersion, MatchesExactOnUnitInterval) {
  const auto omega = resum_dispersion(ce_coefficients(WeightModel::gaussian(), 30), 14, 14);
  EXPECT_EQ(omega(0.0), 0.0);
  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double k = 0.01 * i;
    worst = std::max(worst, std::fabs(omega(k) - solve_exact_gaussian(k).omega));
  }
  EXPECT_LT(worst, 1e-6);
  EXPECT_NEAR(omega(0.2), solve_exact_gaussian(0.2).omega, 1e-8);
  EXPECT_LT(omega.check_mismatch(), 1e-6);
}

TEST(ResumDispersion, LowOrderBeatsFourthOrderTruncation) {
  const auto c = ce_coefficients(WeightModel::gaussian(), 4);
  const auto omega = resum_dispersion(c, 1, 1);
  const double k = 0.3;
  const double exact = solve_exact_gaussian(k).omega;
  EXPECT_LT(std::fabs(omega(k) - exact), std::fabs(ce_truncation_eval(c, 4, k) - exact));
  EXPECT_THROW(resum_dispersion(c, 3, 3), Error);
}

TEST(ResumDispersion, WithinFirstOmittedTermForSmallK) {
  const auto c = ce_coefficients(WeightModel::gaussian(), 30);
  const auto omega = resum_dispersion(c, 14, 14);
  for (double k = 0.02; k <= 0.3 + 1e-12; k += 0.02) {
    const double omitted = std::fabs(c.a(6).to_double()) * std::pow(k, 12);
    EXPECT_LE(std::fabs(omega(k) - ce_truncation_eval(c, 10, k)), omitted) << "k=" << k;
  }
}

TEST(CeTruncation, Examples) {
  const auto c = ce_coefficients(WeightModel::gaussian(), 3);
  EXPECT_DOUBLE_EQ(ce_truncation_eval(c, 2, 0.5), -0.25);
  EXPECT_DOUBLE_EQ(ce_truncation_eval(c, 4, 0.5), -0.1875);
  EXPECT_EQ(ce_truncation_eval(c, 0, 0.7), 0.0);
  EXPECT_EQ(ce_truncation_eval(c, 5, 0.5), ce_truncation_eval(c, 4, 0.5));
  try {
    ce_truncation_eval(c, 8, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrderExceeded);
  }
}
