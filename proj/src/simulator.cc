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

#include "pnsgd/simulator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace pnsgd {
namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

double Sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                  : std::exp(z) / (1.0 + std::exp(z));
}

// log(1 + e^z) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

absl::Status CheckData(const PnsgdConfig& config, const Dataset& data) {
  if (data.n != config.n || data.d != config.d) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dataset is %d x %d but the configuration expects %d x %d", data.n,
        data.d, config.n, config.d));
  }
  if (data.features.size() != static_cast<size_t>(data.n) * data.d ||
      data.responses.size() != static_cast<size_t>(data.n)) {
    return absl::InvalidArgumentError("dataset storage has the wrong size");
  }
  if (config.loss == LossKind::kLogistic) {
    for (double y : data.responses) {
      if (y != 0.0 && y != 1.0) {
        return absl::InvalidArgumentError(
            "logistic responses must be labels in {0, 1}");
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateConfig(const PnsgdConfig& c) {
  if (c.n < 1) return absl::InvalidArgumentError("n must be >= 1");
  if (c.d < 1) return absl::InvalidArgumentError("d must be >= 1");
  if (!(c.radius > 0.0)) return absl::InvalidArgumentError("R must be > 0");
  if (c.replicas < 1) {
    return absl::InvalidArgumentError("replicas must be >= 1");
  }
  if (!(c.noise.scale > 0.0)) {
    return absl::InvalidArgumentError("noise scale must be > 0");
  }
  if (!(c.profile.learning_rate > 0.0)) {
    return absl::InvalidArgumentError("learning rate eta must be > 0");
  }
  return absl::OkStatus();
}

std::vector<double> ProjectOntoBall(std::span<const double> u, double radius) {
  std::vector<double> out(u.begin(), u.end());
  const double norm = Norm(u);
  if (norm > radius) {
    const double scale = radius / norm;
    for (double& v : out) v *= scale;
  }
  return out;
}

std::vector<double> LossGradient(LossKind loss, std::span<const double> w,
                                 std::span<const double> x, double y) {
  const double z = Dot(w, x);
  // Linear: l = (w^T x - y)^2 / 2. Logistic: l = log(1 + e^z) - y z.
  const double residual = loss == LossKind::kLinear ? z - y : Sigmoid(z) - y;
  std::vector<double> grad(x.begin(), x.end());
  for (double& g : grad) g *= residual;
  return grad;
}

double DatasetLoss(LossKind loss, const Dataset& data,
                   std::span<const double> w) {
  if (data.n == 0) return 0.0;
  double total = 0.0;
  for (int64_t k = 0; k < data.n; ++k) {
    const double z = Dot(w, data.Row(k));
    const double y = data.responses[k];
    if (loss == LossKind::kLinear) {
      total += (z - y) * (z - y);
    } else {
      total += Softplus(z) - y * z;
    }
  }
  return total / static_cast<double>(data.n);
}

absl::StatusOr<std::vector<double>> PnsgdStep(
    std::span<const double> w, std::span<const double> x, double y,
    std::span<const double> noise_sample, LossKind loss,
    const LossProfile& profile, double radius) {
  if (x.size() != w.size() || noise_sample.size() != w.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: w has %d entries, x %d, noise %d", w.size(),
        x.size(), noise_sample.size()));
  }
  const std::vector<double> grad = LossGradient(loss, w, x, y);
  std::vector<double> u(w.size());
  for (size_t k = 0; k < w.size(); ++k) {
    u[k] = w[k] - profile.learning_rate * (grad[k] + noise_sample[k]);
  }
  return ProjectOntoBall(u, radius);
}

std::vector<double> SampleNoise(const NoiseModel& noise, int d,
                                const StreamKey& key, uint64_t step) {
  std::vector<double> out(d);
  for (int k = 0; k < d; ++k) {
    const uint64_t index = step * static_cast<uint64_t>(d) + k;
    if (noise.kind == NoiseKind::kGaussian) {
      out[k] = noise.scale * CounterNormal(key, index);
    } else {
      // Inverse CDF of Laplace(0, v) at u in (0, 1).
      const double centred = CounterUniform(key, index) - 0.5;
      out[k] = -noise.scale * std::copysign(1.0, centred) *
               std::log1p(-2.0 * std::abs(centred));
    }
  }
  return out;
}

std::vector<int64_t> SamplePermutation(int64_t n, const StreamKey& key) {
  std::vector<int64_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int64_t k = n - 1; k > 0; --k) {
    const double u = CounterUniform(key, static_cast<uint64_t>(k));
    const auto j = std::min<int64_t>(k, static_cast<int64_t>(u * (k + 1)));
    std::swap(perm[k], perm[j]);
  }
  return perm;
}

int64_t SampleStoppingTime(int64_t n, const StreamKey& key) {
  const double u = CounterUniform(key, 0);
  return std::min<int64_t>(n, 1 + static_cast<int64_t>(u * n));
}

Dataset GenerateSynthetic(LossKind loss, int64_t n,
                          std::span<const double> theta_star, uint64_t seed) {
  Dataset data;
  data.n = n;
  data.d = static_cast<int>(theta_star.size());
  data.features.resize(static_cast<size_t>(n) * data.d);
  data.responses.resize(n);
  const StreamKey key{seed, 0, StreamPurpose::kData};
  // Counters: covariates first, then one slot per response.
  const uint64_t stride = static_cast<uint64_t>(data.d) + 1;
  for (int64_t k = 0; k < n; ++k) {
    const uint64_t base = static_cast<uint64_t>(k) * stride;
    for (int c = 0; c < data.d; ++c) {
      data.features[k * data.d + c] = CounterNormal(key, base + c);
    }
    const double z = Dot(theta_star, data.Row(k));
    if (loss == LossKind::kLinear) {
      data.responses[k] = z + CounterNormal(key, base + data.d);
    } else {
      // Uniform draws live in a separate counter range from the normals.
      const double u = CounterUniform(key, (uint64_t{1} << 62) + k);
      data.responses[k] = u < Sigmoid(z) ? 1.0 : 0.0;
    }
  }
  return data;
}

absl::StatusOr<TrajectoryResult> Run(const PnsgdConfig& config,
                                     const Dataset& data, uint64_t replica) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  if (absl::Status s = CheckData(config, data); !s.ok()) return s;

  const StreamKey noise_key{config.seed, replica, StreamPurpose::kNoise};
  std::vector<int64_t> order;
  int64_t steps = config.n;
  if (config.variant == Variant::kShuffled) {
    order = SamplePermutation(
        config.n, {config.seed, replica, StreamPurpose::kPermutation});
  } else {
    order.resize(config.n);
    std::iota(order.begin(), order.end(), 0);
    steps = SampleStoppingTime(
        config.n, {config.seed, replica, StreamPurpose::kStoppingTime});
  }

  TrajectoryResult result;
  std::vector<double> w(config.d, 0.0);
  result.initial_loss = DatasetLoss(config.loss, data, w);
  for (int64_t t = 0; t < steps; ++t) {
    const int64_t k = order[t];
    const std::vector<double> z =
        SampleNoise(config.noise, config.d, noise_key, static_cast<uint64_t>(t));
    absl::StatusOr<std::vector<double>> next =
        PnsgdStep(w, data.Row(k), data.responses[k], z, config.loss,
                  config.profile, config.radius);
    if (!next.ok()) return next.status();
    w = *std::move(next);
    if (config.record_step_loss) {
      result.per_step_loss.push_back(DatasetLoss(config.loss, data, w));
    }
  }
  result.steps_executed = steps;
  result.per_epoch_loss.push_back(DatasetLoss(config.loss, data, w));
  result.final_parameter = std::move(w);
  return result;
}

absl::StatusOr<std::vector<TrajectoryResult>> RunReplicas(
    const PnsgdConfig& config, const Dataset& data, int workers) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  const int replicas = config.replicas;
  std::vector<absl::StatusOr<TrajectoryResult>> slots(
      replicas, absl::UnknownError("not run"));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r = next++; r < replicas; r = next++) {
      slots[r] = Run(config, data, static_cast<uint64_t>(r));
    }
  };
  const int threads = std::clamp(workers, 1, replicas);
  std::vector<std::jthread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(work);
  work();
  pool.clear();

  std::vector<TrajectoryResult> out;
  out.reserve(replicas);
  for (auto& slot : slots) {
    if (!slot.ok()) return slot.status();
    out.push_back(*std::move(slot));
  }
  return out;
}

}  // namespace pnsgd
