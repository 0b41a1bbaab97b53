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

#ifndef PNSGD_PRIVACY_BOUNDS_H_
#define PNSGD_PRIVACY_BOUNDS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "pnsgd/special_functions.h"

namespace pnsgd {

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
};

// Returns InvalidArgument unless epsilon >= 0 and delta is in [0, 1].
absl::Status ValidateBudget(const PrivacyBudget& budget);

enum class NoiseKind { kGaussian, kLaplace };

// Gaussian: scale is the standard deviation sigma. Laplace: scale is v.
struct NoiseModel {
  NoiseKind kind = NoiseKind::kGaussian;
  double scale = 0.0;
};

// Projection set. Balls pair with Gaussian noise, intervals with Laplace.
struct GeometrySpec {
  enum class Kind { kBall, kInterval };

  static GeometrySpec Ball(double diameter) {
    return {Kind::kBall, diameter, 0.0, 0.0};
  }
  static GeometrySpec Interval(double lower, double upper) {
    return {Kind::kInterval, 0.0, lower, upper};
  }

  // D_K for balls, b - a for intervals.
  double Extent() const {
    return kind == Kind::kBall ? diameter : upper - lower;
  }

  Kind kind = Kind::kBall;
  double diameter = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

enum class ScheduleMode { kFixed, kOnline };

// Constants of the noise-decay schedules. `alpha` is only meaningful (and
// required, > 1) in online mode.
struct ScheduleSpec {
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<double> alpha;
  ScheduleMode mode = ScheduleMode::kFixed;
};

// delta = A * B^(n - i). `b_complement` carries 1 - B to full relative
// precision; the calibrated schedules drive B to within O(1/n) of one, where
// recomputing 1 - B from B alone loses most of its digits.
struct BoundConstants {
  static BoundConstants FromAB(double a, double b) { return {a, b, 1.0 - b}; }

  double a = 0.0;
  double b = 0.0;
  double b_complement = 1.0;
};

absl::StatusOr<BoundConstants> AbConstants(const NoiseModel& noise,
                                           const LossProfile& profile,
                                           const GeometrySpec& geometry,
                                           double epsilon);

// A * B^(n - i): the guarantee for the i-th entry of an unshuffled pass.
absl::StatusOr<double> PerIndexDelta(const BoundConstants& consts, int64_t n,
                                     int64_t i);

// A (1 - B^(n-i+1)) / (n (1 - B)): stopping time uniform on {1, ..., n}.
absl::StatusOr<double> RandomlyStoppedDelta(const BoundConstants& consts,
                                            int64_t n, int64_t i);

// A (1 - B^n) / (n (1 - B)): the index-free guarantee after a uniform shuffle.
absl::StatusOr<double> ShuffledDelta(const BoundConstants& consts, int64_t n);

// v(n) = M (b - a) / (2 eta log(n / C1 + C2)).
absl::StatusOr<double> FixedLaplaceScale(int64_t n, const ScheduleSpec& sched,
                                         const LossProfile& profile,
                                         const GeometrySpec& geometry);

// sigma(n) = M D_K / (2 eta sqrt(W(n^2 / (2 pi C1^2) + C2))).
absl::StatusOr<double> FixedGaussianScale(int64_t n, const ScheduleSpec& sched,
                                          const LossProfile& profile,
                                          const GeometrySpec& geometry);

// Limits of the shuffled bound under the fixed schedules as n -> infinity.
absl::StatusOr<double> DeltaStarFixedLaplace(double epsilon, double c1);
absl::StatusOr<double> DeltaStarFixedGaussian(double epsilon, double c1);

struct FixedNoiseBound {
  double scale = 0.0;
  BoundConstants constants;
  double delta = 0.0;
};

// Calibrates the fixed schedule for n, then evaluates the shuffled bound.
absl::StatusOr<FixedNoiseBound> ShuffledDeltaFixedNoise(
    int64_t n, double epsilon, const ScheduleSpec& sched,
    const LossProfile& profile, const GeometrySpec& geometry, NoiseKind kind);

// Noise scale of update j under the online schedule (v_j or sigma_j).
absl::StatusOr<double> OnlineScale(int64_t j, const ScheduleSpec& sched,
                                   const LossProfile& profile,
                                   const GeometrySpec& geometry,
                                   NoiseKind kind);

// A_i * prod_{t=i+1}^n B_t under the online schedule.
absl::StatusOr<double> OnlineDeltaFinite(int64_t n, int64_t i, double epsilon,
                                         const ScheduleSpec& sched,
                                         const LossProfile& profile,
                                         const GeometrySpec& geometry,
                                         NoiseKind kind);

// OnlineDeltaFinite for every n in `ns` (ascending, each >= i) in a single
// pass over t.
absl::StatusOr<std::vector<double>> OnlineDeltaFiniteSeries(
    std::span<const int64_t> ns, int64_t i, double epsilon,
    const ScheduleSpec& sched, const LossProfile& profile,
    const GeometrySpec& geometry, NoiseKind kind);

struct OnlineLimitBracket {
  double lower = 0.0;  // A_i exp(int_i^inf g)
  double upper = 0.0;  // A_i exp(int_{i+1}^inf g)
  double a_i = 0.0;
  double log_integral_upper = 0.0;
  double log_integral_lower = 0.0;
  double truncation_point = 0.0;  // T, where the analytic tail bound kicked in
};

// Both integral limits of the online bound. They share the quadrature over
// [i + 1, inf).
absl::StatusOr<OnlineLimitBracket> OnlineDeltaLimitBracket(
    int64_t i, double epsilon, const ScheduleSpec& sched,
    const LossProfile& profile, const GeometrySpec& geometry, NoiseKind kind);

absl::StatusOr<double> OnlineDeltaLimitUpper(int64_t i, double epsilon,
                                             const ScheduleSpec& sched,
                                             const LossProfile& profile,
                                             const GeometrySpec& geometry,
                                             NoiseKind kind);

absl::StatusOr<double> OnlineDeltaLimitLower(int64_t i, double epsilon,
                                             const ScheduleSpec& sched,
                                             const LossProfile& profile,
                                             const GeometrySpec& geometry,
                                             NoiseKind kind);

}  // namespace pnsgd

#endif  // PNSGD_PRIVACY_BOUNDS_H_
