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

#include "pnsgd/privacy_bounds.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "boost/multiprecision/cpp_bin_float.hpp"
#include "gtest/gtest.h"
#include "oracles.h"

namespace pnsgd {
namespace {

using Extended = boost::multiprecision::cpp_bin_float_50;

// Parameter sets shared by the tests.
const LossProfile kProfileEta01{10.0, 0.5, 0.0, 0.1};
const GeometrySpec kUnitInterval = GeometrySpec::Interval(0.0, 1.0);
const ScheduleSpec kLaplaceFixedSchedule{1e5, 2.0, std::nullopt, ScheduleMode::kFixed};
const ScheduleSpec kGaussianFixedSchedule{1e5, 100.0, std::nullopt,
                                 ScheduleMode::kFixed};
const GeometrySpec kUnitBall = GeometrySpec::Ball(1.0);
const LossProfile kProfileEta001{10.0, 0.5, 0.0, 0.01};
const ScheduleSpec kOnlineSchedule{100.0, 100.0, 1.5, ScheduleMode::kOnline};

using testing_oracles::PermutationAverage;

TEST(AbConstantsTest, LaplaceLargeScaleClampsToZero) {
  const BoundConstants c = *AbConstants({NoiseKind::kLaplace, 1e9},
                                        kProfileEta01, kUnitInterval, 1.0);
  EXPECT_EQ(c.a, 0.0);
  EXPECT_EQ(c.b, 0.0);
  EXPECT_EQ(c.b_complement, 1.0);
}

TEST(AbConstantsTest, LaplaceCalibratedScale) {
  const BoundConstants c = *AbConstants({NoiseKind::kLaplace, 4.551},
                                        kProfileEta01, kUnitInterval, 1.0);
  EXPECT_NEAR(c.a, 1.0 - std::exp(0.5 - 10.0 / 4.551), 1e-15);
  EXPECT_NEAR(c.a, 0.8168, 1e-4);
  EXPECT_NEAR(c.b + c.b_complement, 1.0, 1e-15);
}

TEST(AbConstantsTest, GaussianSmallSigmaApproachesOne) {
  const BoundConstants c =
      *AbConstants({NoiseKind::kGaussian, 1e-3}, kProfileEta01, kUnitBall, 1.0);
  EXPECT_NEAR(c.a, 1.0, 1e-15);
  EXPECT_NEAR(c.b, 1.0, 1e-15);
  EXPECT_GE(c.b_complement, 0.0);
}

TEST(AbConstantsTest, GaussianMatchesTheta) {
  const BoundConstants c =
      *AbConstants({NoiseKind::kGaussian, 2.0}, kProfileEta01, kUnitBall, 1.0);
  EXPECT_DOUBLE_EQ(c.a, *ThetaFromEpsilon(1.0, 10.0));
  EXPECT_DOUBLE_EQ(c.b, *ThetaFromEpsilon(1.0, 1.0 / (0.1 * 2.0)));
}

TEST(AbConstantsTest, Validation) {
  EXPECT_EQ(AbConstants({NoiseKind::kGaussian, 1.0}, kProfileEta01,
                        kUnitInterval, 1.0)
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(
      AbConstants({NoiseKind::kLaplace, 1.0}, kProfileEta01, kUnitBall, 1.0)
          .ok());
  EXPECT_FALSE(AbConstants({NoiseKind::kLaplace, 1.0}, kProfileEta01,
                           kUnitInterval, -0.1)
                   .ok());
  EXPECT_FALSE(AbConstants({NoiseKind::kLaplace, 0.0}, kProfileEta01,
                           kUnitInterval, 1.0)
                   .ok());
}

TEST(PerIndexDeltaTest, Examples) {
  EXPECT_EQ(*PerIndexDelta(BoundConstants::FromAB(0.5, 0.9), 7, 7), 0.5);
  EXPECT_EQ(*PerIndexDelta(BoundConstants::FromAB(0.5, 0.0), 3, 1), 0.0);
  EXPECT_EQ(PerIndexDelta(BoundConstants::FromAB(0.5, 0.9), 3, 4)
                .status()
                .code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_FALSE(PerIndexDelta(BoundConstants::FromAB(0.5, 0.9), 3, 0).ok());
}

TEST(PerIndexDeltaTest, CalibratedProductMatchesExtendedPrecision) {
  const int64_t n = 100000;
  const double c1 = 1e5;
  const double c2 = 2.0;
  const double a = 0.8168;
  const double deficit = c1 * std::exp(0.5) / (n + c1 * c2);
  const BoundConstants consts{a, 1.0 - deficit, deficit};
  const Extended b = Extended(1) - Extended(deficit);
  for (int64_t i : {n, n - 1, n - 10, n - 300, n - 880}) {
    const Extended oracle = Extended(a) * pow(b, n - i);
    const double value = *PerIndexDelta(consts, n, i);
    EXPECT_NEAR(value / static_cast<double>(oracle), 1.0, 1e-12) << i;
  }
  // At i = 1 the exact value is ~1e-34700: below the double range.
  EXPECT_EQ(*PerIndexDelta(consts, n, 1), 0.0);
  EXPECT_LT(Extended(a) * pow(b, n - 1), Extended(1e-300));
}

TEST(PerIndexDeltaTest, NonIncreasingInDistanceFromEnd) {
  const BoundConstants c = BoundConstants::FromAB(0.7, 0.95);
  double prev = 1.0;
  for (int64_t i = 50; i >= 1; --i) {
    const double d = *PerIndexDelta(c, 50, i);
    EXPECT_LE(d, prev);
    prev = d;
  }
}

TEST(RandomlyStoppedDeltaTest, Examples) {
  EXPECT_DOUBLE_EQ(*RandomlyStoppedDelta(BoundConstants::FromAB(1.0, 0.0),
                                         10, 4),
                   0.1);
  EXPECT_DOUBLE_EQ(*RandomlyStoppedDelta(BoundConstants::FromAB(0.5, 1.0),
                                         10, 3),
                   0.4);
  double sum = 0.0;
  for (int j = 0; j < 100; ++j) sum += std::pow(0.99, j);
  EXPECT_NEAR(*RandomlyStoppedDelta(BoundConstants::FromAB(0.8, 0.99), 100, 1),
              0.8 * sum / 100.0, 1e-15);
}

TEST(RandomlyStoppedDeltaTest, NearOneIsContinuous) {
  // |1 - B| below 1e-9: the geometric sum tends to n - i + 1 terms of one.
  const double b = 1.0 - 1e-12;
  const double d =
      *RandomlyStoppedDelta(BoundConstants::FromAB(0.5, b), 1000, 1);
  EXPECT_NEAR(d, 0.5, 1e-9);
}

TEST(ShuffledDeltaTest, Examples) {
  EXPECT_DOUBLE_EQ(*ShuffledDelta(BoundConstants::FromAB(0.3, 0.0), 5), 0.06);
  EXPECT_DOUBLE_EQ(*ShuffledDelta(BoundConstants::FromAB(0.6, 0.4), 2),
                   0.6 * 1.4 / 2.0);
  EXPECT_EQ(*ShuffledDelta(BoundConstants::FromAB(0.6, 0.4), 1), 0.6);
  EXPECT_FALSE(ShuffledDelta(BoundConstants::FromAB(0.6, 0.4), 0).ok());
}

TEST(ShuffledDeltaTest, EqualsPermutationAverage) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = unit(rng);
    const double b = unit(rng);
    for (int n = 1; n <= 8; ++n) {
      EXPECT_NEAR(*ShuffledDelta(BoundConstants::FromAB(a, b), n),
                  PermutationAverage(a, b, n), 1e-14)
          << "A=" << a << " B=" << b << " n=" << n;
    }
  }
}

TEST(ShuffledDeltaTest, DominatedByUniformBound) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = unit(rng);
    const double b = 0.999 * unit(rng);
    const int64_t n = 1 + static_cast<int64_t>(unit(rng) * 1000);
    const double d = *ShuffledDelta(BoundConstants::FromAB(a, b), n);
    EXPECT_LE(d, a / (n * (1.0 - b)) * (1 + 1e-15));
    EXPECT_LE(d, a);
    EXPECT_GE(d, 0.0);
  }
}

TEST(FixedScheduleTest, LaplaceCalibration) {
  const double v =
      *FixedLaplaceScale(100000, kLaplaceFixedSchedule, kProfileEta01, kUnitInterval);
  EXPECT_NEAR(v, 1.0 / (0.2 * std::log(3.0)), 1e-14);
  EXPECT_NEAR(v, 4.5511961331341867, 1e-14);
  double prev = v;
  for (int64_t n : {1000000, 10000000, 100000000, 1000000000}) {
    const double next =
        *FixedLaplaceScale(n, kLaplaceFixedSchedule, kProfileEta01, kUnitInterval);
    EXPECT_LT(next, prev);
    prev = next;
  }
  // n / C1 + C2 = e gives log = 1.
  const ScheduleSpec unit_log{1.0, std::numbers::e - 1.0, std::nullopt,
                              ScheduleMode::kFixed};
  EXPECT_NEAR(*FixedLaplaceScale(1, unit_log, kProfileEta01, kUnitInterval),
              1.0 / 0.2, 1e-14);
}

TEST(FixedScheduleTest, LaplaceRejectsNonPositiveScale) {
  const ScheduleSpec bad{1e5, 0.5, std::nullopt, ScheduleMode::kFixed};
  EXPECT_EQ(FixedLaplaceScale(10, bad, kProfileEta01, kUnitInterval)
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
  const ScheduleSpec online{1e5, 2.0, 1.5, ScheduleMode::kOnline};
  EXPECT_FALSE(FixedLaplaceScale(10, online, kProfileEta01, kUnitInterval).ok());
}

TEST(FixedScheduleTest, GaussianCalibration) {
  const double sigma =
      *FixedGaussianScale(100000, kGaussianFixedSchedule, kProfileEta01, kUnitBall);
  const double w = *LambertW0(1.0 / (2.0 * std::numbers::pi) + 100.0);
  EXPECT_NEAR(sigma, 1.0 / (0.2 * std::sqrt(w)), 1e-14);
  EXPECT_NEAR(sigma, 2.7168866444221664, 1e-13);
  double prev = sigma;
  for (int64_t n : {1000000, 10000000, 100000000}) {
    const double next =
        *FixedGaussianScale(n, kGaussianFixedSchedule, kProfileEta01, kUnitBall);
    EXPECT_LT(next, prev);
    prev = next;
  }
  // W argument = e gives W = 1.
  const ScheduleSpec unit_w{1e9, std::numbers::e - 1e-18 / (2 * M_PI),
                            std::nullopt, ScheduleMode::kFixed};
  EXPECT_NEAR(*FixedGaussianScale(1, unit_w, kProfileEta01, kUnitBall),
              1.0 / 0.2, 1e-12);
}

TEST(DeltaStarTest, Examples) {
  EXPECT_NEAR(*DeltaStarFixedLaplace(1.0, 1e5), 6.0653065971263342e-6, 1e-20);
  EXPECT_NEAR(*DeltaStarFixedLaplace(1.0, 1e-12), 1.0, 1e-11);
  EXPECT_NEAR(*DeltaStarFixedLaplace(0.0, 1.0), 0.63212055882855768, 1e-16);
  EXPECT_NEAR(*DeltaStarFixedGaussian(1.0, 1e5), 3.0326532985631671e-6, 1e-20);
  EXPECT_NEAR(*DeltaStarFixedGaussian(1.0, 1e-12), 1.0, 1e-11);
  for (double eps : {0.0, 0.5, 2.0}) {
    for (double c1 : {0.1, 3.0, 1e4}) {
      EXPECT_EQ(*DeltaStarFixedGaussian(eps, c1),
                *DeltaStarFixedLaplace(eps, 2.0 * c1));
    }
  }
}

TEST(ShuffledDeltaFixedNoiseTest, SingleEntryIsA) {
  const FixedNoiseBound b = *ShuffledDeltaFixedNoise(
      1, 1.0, kLaplaceFixedSchedule, kProfileEta01, kUnitInterval, NoiseKind::kLaplace);
  EXPECT_EQ(b.delta, b.constants.a);
}

TEST(ShuffledDeltaFixedNoiseTest, LargeNApproachesLimit) {
  // Reference values from a 40-digit evaluation of the same formulas.
  const FixedNoiseBound laplace =
      *ShuffledDeltaFixedNoise(10000000, 1.0, kLaplaceFixedSchedule, kProfileEta01,
                               kUnitInterval, NoiseKind::kLaplace);
  EXPECT_NEAR(laplace.delta / 6.185632336911998e-06, 1.0, 1e-9);
  const double laplace_star = *DeltaStarFixedLaplace(1.0, 1e5);
  EXPECT_LT(std::abs(laplace.delta / laplace_star - 1.0), 0.025);

  const FixedNoiseBound gaussian =
      *ShuffledDeltaFixedNoise(10000000, 1.0, kGaussianFixedSchedule, kProfileEta01,
                               kUnitBall, NoiseKind::kGaussian);
  EXPECT_NEAR(gaussian.delta / 3.625679729917592e-06, 1.0, 1e-8);
  const double gaussian_star = *DeltaStarFixedGaussian(1.0, 1e5);
  EXPECT_LT(std::abs(gaussian.delta / gaussian_star - 1.0), 0.2);
}

TEST(ShuffledDeltaFixedNoiseTest, LaplaceRateIsInverseN) {
  const double star = *DeltaStarFixedLaplace(1.0, 1e5);
  std::vector<double> scaled;
  for (int64_t n : {10000, 100000, 1000000, 10000000}) {
    const FixedNoiseBound b =
        *ShuffledDeltaFixedNoise(n, 1.0, kLaplaceFixedSchedule, kProfileEta01,
                                 kUnitInterval, NoiseKind::kLaplace);
    scaled.push_back(static_cast<double>(n) * std::abs(b.delta - star));
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  EXPECT_LT(*hi / *lo, 10.0);
}

TEST(OnlineScaleTest, LaplaceDecay) {
  const double v = *OnlineScale(100, kOnlineSchedule, kProfileEta001,
                                kUnitInterval, NoiseKind::kLaplace);
  EXPECT_NEAR(v, 1.0 / (0.02 * std::log(110.0)), 1e-13);
  double prev = v;
  for (int64_t j : {1000, 100000, 10000000}) {
    const double next = *OnlineScale(j, kOnlineSchedule, kProfileEta001,
                                     kUnitInterval, NoiseKind::kLaplace);
    EXPECT_LT(next, prev);
    prev = next;
  }
}

TEST(OnlineScaleTest, GaussianDecay) {
  const double sigma = *OnlineScale(100, kOnlineSchedule, kProfileEta001,
                                    kUnitBall, NoiseKind::kGaussian);
  EXPECT_NEAR(sigma, 26.725831812144732, 1e-12);
  EXPECT_LT(*OnlineScale(100000, kOnlineSchedule, kProfileEta001, kUnitBall,
                         NoiseKind::kGaussian),
            sigma);
}

TEST(OnlineScaleTest, RequiresAlphaAboveOne) {
  ScheduleSpec s = kOnlineSchedule;
  s.alpha = 1.0;
  EXPECT_FALSE(
      OnlineScale(5, s, kProfileEta001, kUnitInterval, NoiseKind::kLaplace).ok());
  s.alpha.reset();
  EXPECT_FALSE(
      OnlineScale(5, s, kProfileEta001, kUnitInterval, NoiseKind::kLaplace).ok());
  EXPECT_FALSE(OnlineScale(5, kLaplaceFixedSchedule, kProfileEta001, kUnitInterval,
                           NoiseKind::kLaplace)
                   .ok());
}

TEST(OnlineDeltaFiniteTest, EmptyProductIsA) {
  const double v = *OnlineScale(100, kOnlineSchedule, kProfileEta001,
                                kUnitInterval, NoiseKind::kLaplace);
  const BoundConstants c = *AbConstants({NoiseKind::kLaplace, v}, kProfileEta001,
                                        kUnitInterval, 1.0);
  EXPECT_EQ(*OnlineDeltaFinite(100, 100, 1.0, kOnlineSchedule, kProfileEta001,
                               kUnitInterval, NoiseKind::kLaplace),
            c.a);
}

TEST(OnlineDeltaFiniteTest, ClampedFactorAnnihilates) {
  // C1 e^{eps/2} / (t^alpha + C1 C2) >= 1 for the first updates.
  const ScheduleSpec harsh{1e6, 1.5, 1.5, ScheduleMode::kOnline};
  EXPECT_EQ(*OnlineDeltaFinite(50, 1, 1.0, harsh, kProfileEta001, kUnitInterval,
                               NoiseKind::kLaplace),
            0.0);
}

TEST(OnlineDeltaFiniteTest, MatchesExtendedPrecisionProduct) {
  const int64_t i = 100;
  const int64_t n = 10000;
  for (NoiseKind kind : {NoiseKind::kLaplace, NoiseKind::kGaussian}) {
    const GeometrySpec& geom =
        kind == NoiseKind::kLaplace ? kUnitInterval : kUnitBall;
    const double scale_i =
        *OnlineScale(i, kOnlineSchedule, kProfileEta001, geom, kind);
    Extended product =
        AbConstants({kind, scale_i}, kProfileEta001, geom, 1.0)->a;
    for (int64_t t = i + 1; t <= n; ++t) {
      const double scale_t =
          *OnlineScale(t, kOnlineSchedule, kProfileEta001, geom, kind);
      const BoundConstants c =
          *AbConstants({kind, scale_t}, kProfileEta001, geom, 1.0);
      product *= Extended(1) - Extended(c.b_complement);
    }
    const double value = *OnlineDeltaFinite(n, i, 1.0, kOnlineSchedule,
                                            kProfileEta001, geom, kind);
    EXPECT_NEAR(value / static_cast<double>(product), 1.0, 1e-10);
  }
}

TEST(OnlineDeltaFiniteTest, ReferenceValues) {
  // Laplace: double-precision log-sum in an independent script.
  EXPECT_NEAR(*OnlineDeltaFinite(10000, 100, 1.0, kOnlineSchedule, kProfileEta001,
                                 kUnitInterval, NoiseKind::kLaplace) /
                  4.1495077050722385e-07,
              1.0, 1e-10);
  // Gaussian: 30-digit evaluation.
  EXPECT_NEAR(*OnlineDeltaFinite(10000, 100, 1.0, kOnlineSchedule, kProfileEta001,
                                 kUnitBall, NoiseKind::kGaussian) /
                  1.47489067978535673767e-20,
              1.0, 1e-9);
}

TEST(OnlineDeltaFiniteTest, SeriesMatchesPointwise) {
  const std::vector<int64_t> grid = {100, 150, 1000, 5000};
  const std::vector<double> series =
      *OnlineDeltaFiniteSeries(grid, 100, 1.0, kOnlineSchedule, kProfileEta001,
                               kUnitInterval, NoiseKind::kLaplace);
  ASSERT_EQ(series.size(), grid.size());
  for (size_t k = 0; k < grid.size(); ++k) {
    EXPECT_DOUBLE_EQ(series[k],
                     *OnlineDeltaFinite(grid[k], 100, 1.0, kOnlineSchedule,
                                        kProfileEta001, kUnitInterval,
                                        NoiseKind::kLaplace));
  }
  const std::vector<int64_t> unsorted = {200, 150};
  EXPECT_FALSE(OnlineDeltaFiniteSeries(unsorted, 100, 1.0, kOnlineSchedule,
                                       kProfileEta001, kUnitInterval,
                                       NoiseKind::kLaplace)
                   .ok());
}

TEST(OnlineBracketTest, LaplaceReferenceValues) {
  const OnlineLimitBracket b =
      *OnlineDeltaLimitBracket(100, 1.0, kOnlineSchedule, kProfileEta001,
                               kUnitInterval, NoiseKind::kLaplace);
  // 30-digit quadrature of the same integrals.
  EXPECT_NEAR(b.upper / 1.55875243043683883e-8, 1.0, 1e-9);
  EXPECT_NEAR(b.lower / 1.53540520558314952e-8, 1.0, 1e-9);
  EXPECT_LE(b.lower, b.upper);
  const double finite = *OnlineDeltaFinite(1000000, 100, 1.0, kOnlineSchedule,
                                           kProfileEta001, kUnitInterval,
                                           NoiseKind::kLaplace);
  EXPECT_NEAR(finite / 2.151331314997605e-08, 1.0, 1e-10);
  EXPECT_GE(finite, b.lower);
  EXPECT_GE(finite, b.upper);
}

TEST(OnlineBracketTest, GaussianReferenceValues) {
  const OnlineLimitBracket b =
      *OnlineDeltaLimitBracket(100, 1.0, kOnlineSchedule, kProfileEta001,
                               kUnitBall, NoiseKind::kGaussian);
  EXPECT_NEAR(b.a_i, 0.0495035278585638307, 1e-14);
  EXPECT_NEAR(b.upper / 3.00803865869676278804e-23, 1.0, 1e-8);
  EXPECT_NEAR(b.lower / 2.71177618460819010303e-23, 1.0, 1e-8);
}

TEST(OnlineBracketTest, VanishingPerturbationGivesA) {
  const ScheduleSpec tiny{1e-9, 100.0, 1.5, ScheduleMode::kOnline};
  for (NoiseKind kind : {NoiseKind::kLaplace, NoiseKind::kGaussian}) {
    const GeometrySpec& geom =
        kind == NoiseKind::kLaplace ? kUnitInterval : kUnitBall;
    const OnlineLimitBracket b =
        *OnlineDeltaLimitBracket(10, 1.0, tiny, kProfileEta001, geom, kind);
    EXPECT_NEAR(b.upper / b.a_i, 1.0, 1e-6);
    EXPECT_NEAR(b.lower / b.a_i, 1.0, 1e-6);
  }
}

TEST(OnlineBracketTest, LowerNeverExceedsUpper) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ScheduleSpec s{std::pow(10.0, 3.0 * u(rng)), 2.0 + 100.0 * u(rng),
                         1.1 + 1.5 * u(rng), ScheduleMode::kOnline};
    const int64_t i = 1 + static_cast<int64_t>(500 * u(rng));
    const double eps = 2.0 * u(rng);
    const NoiseKind kind =
        trial % 2 == 0 ? NoiseKind::kLaplace : NoiseKind::kGaussian;
    const GeometrySpec& geom =
        kind == NoiseKind::kLaplace ? kUnitInterval : kUnitBall;
    absl::StatusOr<OnlineLimitBracket> b =
        OnlineDeltaLimitBracket(i, eps, s, kProfileEta001, geom, kind);
    ASSERT_TRUE(b.ok()) << b.status();
    EXPECT_LE(b->lower, b->upper);
    EXPECT_GE(b->lower, 0.0);
    EXPECT_LE(b->upper, 1.0);
  }
}

TEST(OnlineBracketTest, UndefinedIntegrandGivesZero) {
  const ScheduleSpec harsh{1e6, 1.5, 1.5, ScheduleMode::kOnline};
  const OnlineLimitBracket b = *OnlineDeltaLimitBracket(
      1, 1.0, harsh, kProfileEta001, kUnitInterval, NoiseKind::kLaplace);
  EXPECT_EQ(b.upper, 0.0);
  EXPECT_EQ(b.lower, 0.0);
}

}  // namespace
}  // namespace pnsgd
