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

#ifndef PNSGD_COMPOSITION_H_
#define PNSGD_COMPOSITION_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "absl/status/statusor.h"
#include "pnsgd/privacy_bounds.h"

namespace pnsgd {

// A Renyi-DP guarantee at a single order.
struct RdpPoint {
  double alpha = 2.0;
  double eps_rdp = 0.0;  // may be negative; see DpToRdp()
};

// mu-Gaussian differential privacy.
struct GdpParam {
  double mu = 0.0;
};

// (eps, delta) -> (alpha, eps + log(delta) / (alpha - 1)). The conversion is
// applied as stated, which yields a negative Renyi epsilon whenever
// eps < -log(delta) / (alpha - 1); the value is returned unmodified.
absl::StatusOr<RdpPoint> DpToRdp(const PrivacyBudget& budget, double alpha);

// Additive composition at fixed order.
absl::StatusOr<RdpPoint> RdpCompose(const RdpPoint& point, int64_t epochs);

// (alpha, eps') -> (eps' - log(delta) / (alpha - 1), delta).
absl::StatusOr<PrivacyBudget> RdpToDp(const RdpPoint& point,
                                      double delta_target);

// The unique mu with theta_{e^eps}(mu) = delta.
absl::StatusOr<GdpParam> DpToGdp(const PrivacyBudget& budget);

// mu -> sqrt(E) mu.
absl::StatusOr<GdpParam> GdpCompose(const GdpParam& param, int64_t epochs);

// (eps, theta_{e^eps}(mu)).
absl::StatusOr<PrivacyBudget> GdpToDp(const GdpParam& param, double epsilon);

struct RdpMethod {
  double alpha = 2.0;
  double delta_target = 1e-5;
};

struct GdpMethod {
  double epsilon_target = 1.0;
};

using CompositionMethod = std::variant<RdpMethod, GdpMethod>;

// Intermediate currency values of a composition pipeline.
struct CompositionTrace {
  std::string currency;        // "rdp" or "gdp"
  double per_epoch_value = 0;  // eps_rdp or mu after the first epoch
  double composed_value = 0;   // eps_rdp or mu after all epochs
  double rdp_alpha = 0;        // order used (rdp only)
  bool negative_rdp_epsilon = false;
};

struct CompositionResult {
  PrivacyBudget budget;
  CompositionTrace trace;
};

// dp -> currency -> compose over `epochs` -> dp.
absl::StatusOr<CompositionResult> ComposeEpochs(const PrivacyBudget& per_epoch,
                                                int64_t epochs,
                                                const CompositionMethod& method);

// Default Renyi orders searched by RdpAlphaSweep().
std::span<const double> DefaultRdpOrders();

// Runs the RDP pipeline at every order in `orders` and returns the result
// with the smallest final epsilon.
absl::StatusOr<CompositionResult> RdpAlphaSweep(
    const PrivacyBudget& per_epoch, int64_t epochs, double delta_target,
    std::span<const double> orders = DefaultRdpOrders());

}  // namespace pnsgd

#endif  // PNSGD_COMPOSITION_H_
