// Copyright 2026 The PNSGD Accountant Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pnsgd/special_functions.h"

#include <cmath>
#include <numbers>
#include <random>

#include "boost/math/quadrature/gauss_kronrod.hpp"
#include "gtest/gtest.h"

namespace pnsgd {
namespace {

constexpr double kE = std::numbers::e;

// Independent route to Q: integrate the standard normal density.
double QByQuadrature(double t) {
  auto density = [](double u) {
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
  };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      density, t, 40.0, 20, 1e-14, &error);
}

// Independent route to W0 on [lo, hi]: bisection on w e^w - x.
double LambertByBisection(double x, double lo, double hi) {
  for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::exp(mid) < x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(QFunctionTest, SymmetryPoint) { EXPECT_DOUBLE_EQ(QFunction(0.0), 0.5); }

TEST(QFunctionTest, MatchesDensityQuadrature) {
  const double oracle = QByQuadrature(1.0);
  EXPECT_NEAR(oracle, 0.15865525393145705, 1e-12);
  EXPECT_NEAR(QFunction(1.0), oracle, 1e-12);
}

TEST(QFunctionTest, FarTailIsNonNegativeAndTiny) {
  // Q(40) ~ 3.7e-350 is below the smallest subnormal double, so the value
  // itself cannot be represented; its logarithm can.
  const double q = QFunction(40.0);
  EXPECT_GE(q, 0.0);
  EXPECT_LT(q, 1e-300);
  // log Q(40) = -800 - log(40 sqrt(2 pi)) + log(1 - 1/t^2 + 3/t^4 - ...).
  const double expected = -800.0 - std::log(40.0) - 0.5 * std::log(2 * M_PI) +
                          std::log1p(-1.0 / 1600.0 + 3.0 / std::pow(1600.0, 2) -
                                     15.0 / std::pow(1600.0, 3) +
                                     105.0 / std::pow(1600.0, 4));
  EXPECT_NEAR(LogQFunction(40.0), expected, 1e-12);
}

TEST(QFunctionTest, LogTailContinuousAcrossSeriesCutoff) {
  // Both sides of the switch from erfc to the asymptotic series.
  for (double t : {29.0, 29.999, 30.0, 30.001, 31.0}) {
    const double direct = std::log(QFunction(t));
    EXPECT_NEAR(LogQFunction(t), direct, 1e-12 * std::abs(direct)) << t;
  }
  EXPECT_NEAR(LogQFunction(-3.0), std::log1p(-QFunction(3.0)), 1e-16);
}

TEST(QFunctionTest, RelativeAccuracyInUpperTail) {
  // Q(10) = 7.6198530241605261e-24 (mpmath, 50 digits).
  EXPECT_NEAR(QFunction(10.0) / 7.6198530241605261e-24, 1.0, 1e-13);
}

TEST(ThetaTest, GammaOneCollapsesToCentralMass) {
  // theta_1(2) = 1 - 2 Q(1).
  const double expected = 1.0 - 2.0 * QByQuadrature(1.0);
  EXPECT_NEAR(*Theta(1.0, 2.0), expected, 1e-12);
  EXPECT_NEAR(*Theta(1.0, 2.0), 0.68268949213708590, 1e-14);
}

TEST(ThetaTest, VanishesForTinySeparation) {
  EXPECT_LT(*Theta(kE, 1e-6), 1e-12);
  EXPECT_GE(*Theta(kE, 1e-6), 0.0);
}

TEST(ThetaTest, MatchesDivergenceOracle) {
  for (double r : {2.0, 4.551}) {
    const double oracle = *DivergenceOracle(kE, r, 1.0);
    EXPECT_NEAR(*Theta(kE, r), oracle, 1e-8) << r;
  }
  // mpmath, 120 digits.
  EXPECT_NEAR(*Theta(kE, 2.0), 0.50986166005467015, 1e-14);
  EXPECT_NEAR(*Theta(kE, 4.551), 0.96298939889572032, 1e-14);
}

TEST(ThetaTest, RejectsInvalidArguments) {
  EXPECT_EQ(Theta(0.5, 1.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(Theta(2.0, 0.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(Theta(2.0, -1.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(Theta(INFINITY, 1.0).ok());
  EXPECT_FALSE(Theta(2.0, NAN).ok());
}

TEST(ThetaTest, HugeGammaDoesNotOverflow) {
  // e^50 times a tail of order e^-50 and smaller.
  for (double r : {1.0, 10.0, 30.0}) {
    absl::StatusOr<double> t = ThetaFromEpsilon(50.0, r);
    ASSERT_TRUE(t.ok());
    EXPECT_TRUE(std::isfinite(*t));
    EXPECT_GE(*t, 0.0);
    EXPECT_LE(*t, 1.0);
  }
  // Far beyond double range for gamma itself.
  EXPECT_TRUE(ThetaFromEpsilon(800.0, 50.0).ok());
}

TEST(ThetaTest, ComplementAddsToOne) {
  for (double eps : {0.0, 0.5, 1.0, 3.0}) {
    for (double r : {0.1, 1.0, 4.0, 9.0}) {
      const double t = *ThetaFromEpsilon(eps, r);
      const double c = *ThetaComplementFromEpsilon(eps, r);
      EXPECT_NEAR(t + c, 1.0, 4e-16) << eps << " " << r;
    }
  }
  // Deep in the regime where 1 - theta is not representable as a difference:
  // 1 - theta_e(40) = 9.0771e-89 (mpmath).
  const double c = *ThetaComplementFromEpsilon(1.0, 40.0);
  EXPECT_NEAR(c / 9.0770942897436160e-89, 1.0, 1e-10);
}

TEST(ThetaTest, MonotoneAndBounded) {
  for (double gamma : {1.0, kE, kE * kE}) {
    double prev = 0.0;
    for (double r = 0.01; r <= 20.0; r += 0.01) {
      const double t = *Theta(gamma, r);
      EXPECT_GE(t, 0.0);
      EXPECT_LE(t, 1.0);
      EXPECT_GE(t, prev - 1e-15) << gamma << " " << r;
      prev = t;
    }
  }
  for (double r : {0.1, 1.0, 3.0, 10.0}) {
    double prev = 1.0;
    for (double gamma = 1.0; gamma <= 50.0; gamma *= 1.1) {
      const double t = *Theta(gamma, r);
      EXPECT_LE(t, prev + 1e-15) << gamma << " " << r;
      prev = t;
    }
  }
}

TEST(ThetaTest, RandomInstancesAgreeWithOracle) {
  std::mt19937_64 rng(20260501);
  std::uniform_real_distribution<double> log_gamma(0.0, 3.0);
  std::uniform_real_distribution<double> shift(0.01, 10.0);
  std::uniform_real_distribution<double> sigma(0.1, 5.0);
  for (int k = 0; k < 1000; ++k) {
    const double gamma = std::exp(log_gamma(rng));
    const double s = shift(rng);
    const double sg = sigma(rng);
    absl::StatusOr<double> oracle = DivergenceOracle(gamma, s, sg);
    ASSERT_TRUE(oracle.ok()) << oracle.status();
    EXPECT_NEAR(*Theta(gamma, s / sg), *oracle, 1e-7);
  }
}

TEST(DivergenceOracleTest, Examples) {
  EXPECT_EQ(*DivergenceOracle(1.0, 0.0, 1.0), 0.0);
  EXPECT_NEAR(*DivergenceOracle(1e12, 1.0, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(*DivergenceOracle(kE, 2.0, 1.0), *Theta(kE, 2.0), 1e-8);
  // Symmetric in the sign of the shift.
  EXPECT_NEAR(*DivergenceOracle(kE, -2.0, 1.0), *Theta(kE, 2.0), 1e-8);
  EXPECT_FALSE(DivergenceOracle(kE, 1.0, 0.0).ok());
  EXPECT_FALSE(DivergenceOracle(0.9, 1.0, 1.0).ok());
}

TEST(LambertW0Test, Examples) {
  EXPECT_EQ(*LambertW0(0.0), 0.0);
  EXPECT_NEAR(*LambertW0(kE), 1.0, 1e-15);
  const double oracle = LambertByBisection(1.0, 0.0, 1.0);
  EXPECT_NEAR(oracle, 0.56714329040978387, 1e-12);
  EXPECT_NEAR(*LambertW0(1.0), oracle, 1e-12);
}

TEST(LambertW0Test, Residual) {
  for (double x : {0.0, 1e-6, 1.0, kE, 1e3, 1e12, 1e200}) {
    const double w = *LambertW0(x);
    EXPECT_LE(std::abs(w * std::exp(w) - x), 1e-12 * std::max(1.0, x)) << x;
  }
}

TEST(LambertW0Test, LogArgumentMatchesDirect) {
  for (double x : {1e3, 1e100, 1e300}) {
    EXPECT_NEAR(*LambertW0FromLog(std::log(x)), *LambertW0(x),
                1e-13 * *LambertW0(x));
  }
  // W(e^L) satisfies w + log w = L.
  const double w = *LambertW0FromLog(5000.0);
  EXPECT_NEAR(w + std::log(w), 5000.0, 1e-10);
}

TEST(LambertW0Test, RejectsNegative) {
  EXPECT_EQ(LambertW0(-0.1).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ContractionMTest, Examples) {
  EXPECT_EQ(*ContractionM({10.0, 0.5, 0.0, 0.1}), 1.0);
  EXPECT_EQ(*ContractionM({1.0, 1.0, 1.0, 1.0}), 0.0);
  EXPECT_NEAR(*ContractionM({1.0, 1.0, 1.0, 0.5}), std::sqrt(0.5), 1e-16);
  EXPECT_EQ(ContractionM({1.0, 1.0, 1.0, 2.0}).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ThetaAsymptoticTest, LeadingOrderDeficit) {
  const double deficit =
      0.4 * std::exp(-12.5) / std::sqrt(2.0 * std::numbers::pi);
  EXPECT_NEAR(*ThetaAsymptotic(0.0, 1.0, 0.1), 1.0 - deficit, 1e-16);
  // Exact deficit 1 - theta_1(10) = 5.7330e-7 (mpmath); expansion is 3.7% high.
  EXPECT_NEAR(*ThetaComplementFromEpsilon(0.0, 10.0), 5.7330314375838783e-7,
              1e-19);
  EXPECT_NEAR(*ThetaAsymptotic(0.0, 1.0, 1e-3), 1.0, 1e-15);
}

TEST(ThetaAsymptoticTest, SmallSigmaRelativeError) {
  // epsilon = 1, c = 2, sigma = 0.05: r = 40.
  const double exact = *ThetaComplementFromEpsilon(1.0, 40.0);
  const double approx = *ThetaAsymptoticDeficit(1.0, 2.0, 0.05);
  EXPECT_LT(std::abs(exact / approx - 1.0), 0.01);
}

TEST(ThetaAsymptoticTest, DeficitRatioApproachesOne) {
  const double c = 1.0;
  double prev_gap = INFINITY;
  double ratio = 0.0;
  for (double n : {1e4, 1e6, 1e8}) {
    const double sigma = c / (2.0 * std::sqrt(std::log(n)));
    ratio = *ThetaComplementFromEpsilon(0.0, c / sigma) /
            *ThetaAsymptoticDeficit(0.0, c, sigma);
    EXPECT_LT(std::abs(ratio - 1.0), prev_gap);
    prev_gap = std::abs(ratio - 1.0);
  }
  EXPECT_GE(ratio, 0.95);
  EXPECT_LE(ratio, 1.05);
}

}  // namespace
}  // namespace pnsgd
