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

#include "pnsgd/composition.h"

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "boost/math/tools/roots.hpp"
#include "pnsgd/special_functions.h"

namespace pnsgd {
namespace {

constexpr std::array<double, 11> kRdpOrders = {1.5,  2.0,   4.0,   8.0,
                                               16.0, 32.0,  64.0,  128.0,
                                               256.0, 512.0, 1024.0};

// Initial bracket for the GDP inversion; widened geometrically when needed.
constexpr double kMuLow = 1e-8;
constexpr double kMuHigh = 100.0;

absl::Status CheckAlpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Renyi order alpha must be > 1, got %g", alpha));
  }
  return absl::OkStatus();
}

absl::Status CheckOpenUnitDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  return absl::OkStatus();
}

absl::Status CheckEpochs(int64_t epochs) {
  if (epochs < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epochs must be >= 1, got %d", epochs));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<RdpPoint> DpToRdp(const PrivacyBudget& budget, double alpha) {
  if (absl::Status s = ValidateBudget(budget); !s.ok()) return s;
  if (absl::Status s = CheckOpenUnitDelta(budget.delta); !s.ok()) return s;
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  return RdpPoint{alpha, budget.epsilon + std::log(budget.delta) / (alpha - 1.0)};
}

absl::StatusOr<RdpPoint> RdpCompose(const RdpPoint& point, int64_t epochs) {
  if (absl::Status s = CheckAlpha(point.alpha); !s.ok()) return s;
  if (absl::Status s = CheckEpochs(epochs); !s.ok()) return s;
  return RdpPoint{point.alpha, static_cast<double>(epochs) * point.eps_rdp};
}

absl::StatusOr<PrivacyBudget> RdpToDp(const RdpPoint& point,
                                      double delta_target) {
  if (absl::Status s = CheckAlpha(point.alpha); !s.ok()) return s;
  if (absl::Status s = CheckOpenUnitDelta(delta_target); !s.ok()) return s;
  if (!std::isfinite(point.eps_rdp)) {
    return absl::InvalidArgumentError("Renyi epsilon must be finite");
  }
  return PrivacyBudget{
      point.eps_rdp - std::log(delta_target) / (point.alpha - 1.0),
      delta_target};
}

absl::StatusOr<GdpParam> DpToGdp(const PrivacyBudget& budget) {
  if (absl::Status s = ValidateBudget(budget); !s.ok()) return s;
  if (!(budget.delta > 0.0 && budget.delta < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "no mu-GDP parameter attains delta = %g (need 0 < delta < 1)",
        budget.delta));
  }
  const double eps = budget.epsilon;
  const double target = budget.delta;
  absl::Status failure = absl::OkStatus();
  auto residual = [&](double mu) {
    absl::StatusOr<double> theta = ThetaFromEpsilon(eps, mu);
    if (!theta.ok()) {
      failure = theta.status();
      return 0.0;
    }
    return *theta - target;
  };

  double lo = kMuLow;
  double hi = kMuHigh;
  for (int k = 0; k < 200 && residual(lo) > 0.0; ++k) lo *= 0.01;
  for (int k = 0; k < 200 && residual(hi) < 0.0; ++k) hi *= 2.0;
  if (!failure.ok()) return failure;
  double f_lo = residual(lo);
  double f_hi = residual(hi);
  if (f_lo > 0.0 || f_hi < 0.0) {
    return absl::NotFoundError(absl::StrFormat(
        "could not bracket mu for (eps, delta) = (%g, %g)", eps, target));
  }
  if (f_lo == 0.0) return GdpParam{lo};
  if (f_hi == 0.0) return GdpParam{hi};

  std::uintmax_t max_iter = 500;
  // Relative tolerance 1e-10 on mu is ~33 bits; ask for a little more.
  boost::math::tools::eps_tolerance<double> tol(40);
  std::pair<double, double> root = boost::math::tools::toms748_solve(
      residual, lo, hi, f_lo, f_hi, tol, max_iter);
  if (!failure.ok()) return failure;
  if (max_iter >= 500) {
    return absl::InternalError("dp_to_gdp: root finder did not converge");
  }
  return GdpParam{0.5 * (root.first + root.second)};
}

absl::StatusOr<GdpParam> GdpCompose(const GdpParam& param, int64_t epochs) {
  if (!(param.mu > 0.0) || !std::isfinite(param.mu)) {
    return absl::InvalidArgumentError("mu must be > 0");
  }
  if (absl::Status s = CheckEpochs(epochs); !s.ok()) return s;
  return GdpParam{param.mu * std::sqrt(static_cast<double>(epochs))};
}

absl::StatusOr<PrivacyBudget> GdpToDp(const GdpParam& param, double epsilon) {
  if (!(param.mu > 0.0) || std::isnan(param.mu)) {
    return absl::InvalidArgumentError("mu must be > 0");
  }
  if (std::isinf(param.mu)) return PrivacyBudget{epsilon, 1.0};
  absl::StatusOr<double> delta = ThetaFromEpsilon(epsilon, param.mu);
  if (!delta.ok()) return delta.status();
  return PrivacyBudget{epsilon, *delta};
}

absl::StatusOr<CompositionResult> ComposeEpochs(
    const PrivacyBudget& per_epoch, int64_t epochs,
    const CompositionMethod& method) {
  if (absl::Status s = CheckEpochs(epochs); !s.ok()) return s;
  CompositionResult result;
  if (const auto* rdp = std::get_if<RdpMethod>(&method)) {
    absl::StatusOr<RdpPoint> first = DpToRdp(per_epoch, rdp->alpha);
    if (!first.ok()) return first.status();
    absl::StatusOr<RdpPoint> composed = RdpCompose(*first, epochs);
    if (!composed.ok()) return composed.status();
    absl::StatusOr<PrivacyBudget> back =
        RdpToDp(*composed, rdp->delta_target);
    if (!back.ok()) return back.status();
    result.budget = *back;
    result.trace = {"rdp", first->eps_rdp, composed->eps_rdp, rdp->alpha,
                    first->eps_rdp < 0.0};
    return result;
  }
  const auto& gdp = std::get<GdpMethod>(method);
  absl::StatusOr<GdpParam> first = DpToGdp(per_epoch);
  if (!first.ok()) return first.status();
  absl::StatusOr<GdpParam> composed = GdpCompose(*first, epochs);
  if (!composed.ok()) return composed.status();
  absl::StatusOr<PrivacyBudget> back = GdpToDp(*composed, gdp.epsilon_target);
  if (!back.ok()) return back.status();
  result.budget = *back;
  result.trace = {"gdp", first->mu, composed->mu, 0.0, false};
  return result;
}

std::span<const double> DefaultRdpOrders() { return kRdpOrders; }

absl::StatusOr<CompositionResult> RdpAlphaSweep(
    const PrivacyBudget& per_epoch, int64_t epochs, double delta_target,
    std::span<const double> orders) {
  if (orders.empty()) {
    return absl::InvalidArgumentError("RDP order grid is empty");
  }
  std::optional<CompositionResult> best;
  for (double alpha : orders) {
    absl::StatusOr<CompositionResult> r =
        ComposeEpochs(per_epoch, epochs, RdpMethod{alpha, delta_target});
    if (!r.ok()) return r.status();
    if (!best.has_value() || r->budget.epsilon < best->budget.epsilon) {
      best = *r;
    }
  }
  return *best;
}

}  // namespace pnsgd
