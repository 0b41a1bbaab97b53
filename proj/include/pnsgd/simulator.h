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

#ifndef PNSGD_SIMULATOR_H_
#define PNSGD_SIMULATOR_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "pnsgd/privacy_bounds.h"
#include "pnsgd/random.h"
#include "pnsgd/special_functions.h"

namespace pnsgd {

enum class LossKind { kLinear, kLogistic };
enum class Variant { kShuffled, kRandomlyStopped };

// Row-major n x d covariates with one response per row. Logistic responses
// are labels in {0, 1}.
struct Dataset {
  int64_t n = 0;
  int d = 0;
  std::vector<double> features;
  std::vector<double> responses;

  std::span<const double> Row(int64_t k) const {
    return std::span<const double>(features).subspan(k * d, d);
  }
};

struct PnsgdConfig {
  int64_t n = 0;
  int d = 0;
  NoiseModel noise;
  LossProfile profile;  // only learning_rate drives the dynamics
  double radius = 1.0;
  LossKind loss = LossKind::kLinear;
  uint64_t seed = 0;
  Variant variant = Variant::kShuffled;
  int replicas = 1;
  bool record_step_loss = false;
};

struct TrajectoryResult {
  std::vector<double> final_parameter;
  double initial_loss = 0.0;
  // Loss after each completed epoch (one pass per run).
  std::vector<double> per_epoch_loss;
  // Loss after every step; empty unless record_step_loss is set.
  std::vector<double> per_step_loss;
  int64_t steps_executed = 0;
};

absl::Status ValidateConfig(const PnsgdConfig& config);

// Euclidean projection onto the centred ball of radius `radius`.
std::vector<double> ProjectOntoBall(std::span<const double> u, double radius);

// Gradient of the per-example loss at w.
std::vector<double> LossGradient(LossKind loss, std::span<const double> w,
                                 std::span<const double> x, double y);

// Mean squared error (linear) or mean log loss (logistic) over the dataset.
double DatasetLoss(LossKind loss, const Dataset& data,
                   std::span<const double> w);

// Pi_K(w - eta (grad l(w, x) + Z)).
absl::StatusOr<std::vector<double>> PnsgdStep(
    std::span<const double> w, std::span<const double> x, double y,
    std::span<const double> noise_sample, LossKind loss,
    const LossProfile& profile, double radius);

// d i.i.d. draws for the update at `step` of the stream `key`.
std::vector<double> SampleNoise(const NoiseModel& noise, int d,
                                const StreamKey& key, uint64_t step);

// Uniform permutation of {0, ..., n - 1} (Fisher-Yates).
std::vector<int64_t> SamplePermutation(int64_t n, const StreamKey& key);

// Stopping time uniform on {1, ..., n}.
int64_t SampleStoppingTime(int64_t n, const StreamKey& key);

// Standard normal covariates; linear responses x^T theta* + N(0, 1),
// logistic labels Bernoulli(sigmoid(x^T theta*)).
Dataset GenerateSynthetic(LossKind loss, int64_t n,
                          std::span<const double> theta_star, uint64_t seed);

// One epoch of the configured variant for a single replica.
absl::StatusOr<TrajectoryResult> Run(const PnsgdConfig& config,
                                     const Dataset& data, uint64_t replica = 0);

// All replicas, in replica order, spread over up to `workers` threads.
absl::StatusOr<std::vector<TrajectoryResult>> RunReplicas(
    const PnsgdConfig& config, const Dataset& data, int workers = 1);

}  // namespace pnsgd

#endif  // PNSGD_SIMULATOR_H_
