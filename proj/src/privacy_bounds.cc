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
#include <functional>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "boost/math/quadrature/gauss_kronrod.hpp"

namespace pnsgd {
namespace {

// Quadrature panel budget in log(x); the tail criterion normally stops the
// integration after a few dozen panels.
constexpr int kMaxPanels = 1000000;
constexpr double kTailRelativeTolerance = 1e-12;
constexpr double kQuadratureRelativeTolerance = 1e-10;

double LogAddExp(double x, double y) {
  if (x < y) std::swap(x, y);
  if (y == -std::numeric_limits<double>::infinity()) return x;
  return x + std::log1p(std::exp(y - x));
}

double LogOrMinusInf(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

absl::Status CheckIndex(int64_t n, int64_t i) {
  if (n < 1) {
    return absl::OutOfRangeError(absl::StrFormat("n must be >= 1, got %d", n));
  }
  if (i < 1 || i > n) {
    return absl::OutOfRangeError(
        absl::StrFormat("index i = %d outside [1, %d]", i, n));
  }
  return absl::OkStatus();
}

absl::Status CheckConstants(const BoundConstants& c) {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(c.a) || !unit(c.b) || !unit(c.b_complement)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "bound constants must lie in [0, 1]: A = %g, B = %g", c.a, c.b));
  }
  return absl::OkStatus();
}

absl::Status CheckEpsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be finite and >= 0, got %g", epsilon));
  }
  return absl::OkStatus();
}

absl::Status CheckGeometry(const GeometrySpec& geometry, NoiseKind kind) {
  if (kind == NoiseKind::kGaussian) {
    if (geometry.kind != GeometrySpec::Kind::kBall) {
      return absl::InvalidArgumentError(
          "Gaussian noise requires a ball geometry (D_K)");
    }
    if (!(geometry.diameter > 0.0) || !std::isfinite(geometry.diameter)) {
      return absl::InvalidArgumentError("ball diameter D_K must be > 0");
    }
  } else {
    if (geometry.kind != GeometrySpec::Kind::kInterval) {
      return absl::InvalidArgumentError(
          "Laplace noise requires an interval geometry [a, b]");
    }
    if (!(geometry.lower < geometry.upper) || !std::isfinite(geometry.lower) ||
        !std::isfinite(geometry.upper)) {
      return absl::InvalidArgumentError("interval requires a < b");
    }
  }
  return absl::OkStatus();
}

absl::Status CheckProfile(const LossProfile& profile) {
  if (!(profile.lipschitz > 0.0) || !std::isfinite(profile.lipschitz)) {
    return absl::InvalidArgumentError("Lipschitz constant L must be > 0");
  }
  return ContractionM(profile).status();
}

// Sum_{j=0}^{k-1} B^j, written as -expm1(k log1p(-(1 - B))) / (1 - B) so that
// it stays accurate for B within rounding of one.
// log B from whichever of B and 1 - B carries more relative precision.
double LogB(const BoundConstants& c) {
  return c.b_complement < 0.5 ? std::log1p(-c.b_complement) : std::log(c.b);
}

double GeometricSum(const BoundConstants& c, int64_t k) {
  if (k <= 0) return 0.0;
  if (c.b_complement >= 1.0 || c.b == 0.0) return 1.0;
  if (c.b_complement == 0.0) return static_cast<double>(k);
  return -std::expm1(static_cast<double>(k) * LogB(c)) / c.b_complement;
}

double ClampUnit(double x) { return std::clamp(x, 0.0, 1.0); }

struct ResolvedSchedule {
  double c1;
  double c2;
  double alpha;
};

absl::StatusOr<ResolvedSchedule> ResolveSchedule(const ScheduleSpec& sched,
                                                 ScheduleMode expected) {
  if (sched.mode != expected) {
    return absl::InvalidArgumentError(
        expected == ScheduleMode::kFixed
            ? "schedule mode must be 'fixed' for a fixed-noise calibration"
            : "schedule mode must be 'online' for a decaying-noise schedule");
  }
  if (!(sched.c1 > 0.0) || !std::isfinite(sched.c1)) {
    return absl::InvalidArgumentError("schedule constant C1 must be > 0");
  }
  if (!(sched.c2 >= 0.0) || !std::isfinite(sched.c2)) {
    return absl::InvalidArgumentError("schedule constant C2 must be >= 0");
  }
  double alpha = 1.0;
  if (expected == ScheduleMode::kOnline) {
    if (!sched.alpha.has_value() || !(*sched.alpha > 1.0) ||
        !std::isfinite(*sched.alpha)) {
      return absl::InvalidArgumentError(
          "online schedules require an exponent alpha > 1");
    }
    alpha = *sched.alpha;
  }
  return ResolvedSchedule{sched.c1, sched.c2, alpha};
}

// M * extent / (2 eta): the numerator shared by every schedule.
absl::StatusOr<double> ScheduleNumerator(const LossProfile& profile,
                                         const GeometrySpec& geometry,
                                         NoiseKind kind) {
  if (absl::Status s = CheckGeometry(geometry, kind); !s.ok()) return s;
  absl::StatusOr<double> m = ContractionM(profile);
  if (!m.ok()) return m.status();
  return *m * geometry.Extent() / (2.0 * profile.learning_rate);
}

absl::StatusOr<double> LaplaceScaleFromLogArgument(double numerator,
                                                   double log_argument) {
  if (!(log_argument > 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Laplace schedule: log argument %g <= 1 gives a non-positive scale",
        std::exp(log_argument)));
  }
  return numerator / log_argument;
}

absl::StatusOr<double> GaussianScaleFromLogArgument(double numerator,
                                                    double log_argument) {
  absl::StatusOr<double> w = LambertW0FromLog(log_argument);
  if (!w.ok()) return w.status();
  if (!(*w > 0.0)) {
    return absl::InvalidArgumentError(
        "Gaussian schedule: Lambert W argument must be > 0");
  }
  return numerator / std::sqrt(*w);
}

// 1 - B for a given noise scale: the per-step contraction deficit.
absl::StatusOr<double> ContractionDeficit(NoiseKind kind, double scale,
                                          double m, double extent, double eta,
                                          double epsilon) {
  if (kind == NoiseKind::kGaussian) {
    return ThetaComplementFromEpsilon(epsilon, m * extent / (eta * scale));
  }
  return std::min(1.0,
                  std::exp(0.5 * epsilon - m * extent / (2.0 * eta * scale)));
}

// log x^alpha / (2 pi C1^2) + C2 style arguments, in log space.
double OnlineLaplaceLogArgument(double x, const ResolvedSchedule& s) {
  return LogAddExp(s.alpha * std::log(x) - std::log(s.c1), LogOrMinusInf(s.c2));
}

double OnlineGaussianLogArgument(double x, const ResolvedSchedule& s) {
  return LogAddExp(2.0 * s.alpha * std::log(x) -
                       std::log(2.0 * std::numbers::pi) - 2.0 * std::log(s.c1),
                   LogOrMinusInf(s.c2));
}

// Deficit 1 - B(x) of the online schedule extended to real x. For Laplace it
// simplifies to C1 e^{eps/2} / (x^alpha + C1 C2); for Gaussian it is
// 1 - theta_{e^eps}(2 sqrt(W(x^{2 alpha} / (2 pi C1^2) + C2))). Neither form
// depends on M, eta or the geometry.
absl::StatusOr<double> OnlineDeficit(double x, double epsilon,
                                     const ResolvedSchedule& s,
                                     NoiseKind kind) {
  if (kind == NoiseKind::kLaplace) {
    const double log_denominator =
        LogAddExp(s.alpha * std::log(x), LogOrMinusInf(s.c1 * s.c2));
    return std::min(
        1.0, std::exp(std::log(s.c1) + 0.5 * epsilon - log_denominator));
  }
  absl::StatusOr<double> w = LambertW0FromLog(OnlineGaussianLogArgument(x, s));
  if (!w.ok()) return w.status();
  if (!(*w > 0.0)) return 1.0;
  return ThetaComplementFromEpsilon(epsilon, 2.0 * std::sqrt(*w));
}

// Envelope constant K with |g(x)| <= K C1 e^{eps/2} x^{-alpha} beyond the
// point where the envelope holds (deficit <= 1/2, and W >= eps for Gaussian).
double TailEnvelopeConstant(NoiseKind kind) {
  return kind == NoiseKind::kLaplace ? 2.0 : 8.0;
}

absl::StatusOr<bool> TailEnvelopeHolds(double x, double epsilon,
                                       const ResolvedSchedule& s,
                                       NoiseKind kind) {
  absl::StatusOr<double> deficit = OnlineDeficit(x, epsilon, s, kind);
  if (!deficit.ok()) return deficit.status();
  if (*deficit > 0.5) return false;
  if (kind == NoiseKind::kGaussian) {
    absl::StatusOr<double> w =
        LambertW0FromLog(OnlineGaussianLogArgument(x, s));
    if (!w.ok()) return w.status();
    return *w >= epsilon;
  }
  return true;
}

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

// Integrates f over [a, b]; any non-ok status raised inside f is reported.
absl::StatusOr<QuadratureResult> Integrate(
    const std::function<absl::StatusOr<double>(double)>& f, double a,
    double b) {
  absl::Status failure = absl::OkStatus();
  auto wrapped = [&](double x) {
    absl::StatusOr<double> v = f(x);
    if (!v.ok()) {
      if (failure.ok()) failure = v.status();
      return 0.0;
    }
    return *v;
  };
  QuadratureResult r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      wrapped, a, b, 15, 1e-13, &r.error);
  if (!failure.ok()) return failure;
  return r;
}

}  // namespace

absl::Status ValidateBudget(const PrivacyBudget& budget) {
  if (absl::Status s = CheckEpsilon(budget.epsilon); !s.ok()) return s;
  if (!(budget.delta >= 0.0 && budget.delta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in [0, 1], got %g", budget.delta));
  }
  return absl::OkStatus();
}

absl::StatusOr<BoundConstants> AbConstants(const NoiseModel& noise,
                                           const LossProfile& profile,
                                           const GeometrySpec& geometry,
                                           double epsilon) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (absl::Status s = CheckGeometry(geometry, noise.kind); !s.ok()) return s;
  if (absl::Status s = CheckProfile(profile); !s.ok()) return s;
  if (!(noise.scale > 0.0) || std::isnan(noise.scale)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("noise scale must be > 0, got %g", noise.scale));
  }
  const double m = *ContractionM(profile);
  const double eta = profile.learning_rate;
  const double extent = geometry.Extent();
  const double scale = noise.scale;

  BoundConstants c;
  if (noise.kind == NoiseKind::kGaussian) {
    absl::StatusOr<double> a =
        ThetaFromEpsilon(epsilon, 2.0 * profile.lipschitz / scale);
    if (!a.ok()) return a.status();
    const double r_b = m * extent / (eta * scale);
    if (r_b == 0.0) {
      // M = 0: a single step forgets the starting point entirely.
      c.a = *a;
      c.b = 0.0;
      c.b_complement = 1.0;
      return c;
    }
    absl::StatusOr<double> b = ThetaFromEpsilon(epsilon, r_b);
    if (!b.ok()) return b.status();
    absl::StatusOr<double> b_comp = ThetaComplementFromEpsilon(epsilon, r_b);
    if (!b_comp.ok()) return b_comp.status();
    c.a = *a;
    c.b = *b;
    c.b_complement = *b_comp;
    return c;
  }
  const double exponent_a = 0.5 * epsilon - profile.lipschitz / scale;
  const double exponent_b = 0.5 * epsilon - m * extent / (2.0 * eta * scale);
  c.a = std::max(0.0, -std::expm1(exponent_a));
  c.b = std::max(0.0, -std::expm1(exponent_b));
  c.b_complement = std::min(1.0, std::exp(exponent_b));
  return c;
}

absl::StatusOr<double> PerIndexDelta(const BoundConstants& consts, int64_t n,
                                     int64_t i) {
  if (absl::Status s = CheckIndex(n, i); !s.ok()) return s;
  if (absl::Status s = CheckConstants(consts); !s.ok()) return s;
  if (consts.a == 0.0) return 0.0;
  if (n == i) return consts.a;
  if (consts.b == 0.0) return 0.0;
  return ClampUnit(
      std::exp(std::log(consts.a) + static_cast<double>(n - i) * LogB(consts)));
}

absl::StatusOr<double> RandomlyStoppedDelta(const BoundConstants& consts,
                                            int64_t n, int64_t i) {
  if (absl::Status s = CheckIndex(n, i); !s.ok()) return s;
  if (absl::Status s = CheckConstants(consts); !s.ok()) return s;
  return ClampUnit(consts.a * GeometricSum(consts, n - i + 1) /
                   static_cast<double>(n));
}

absl::StatusOr<double> ShuffledDelta(const BoundConstants& consts,
                                     int64_t n) {
  if (n < 1) {
    return absl::OutOfRangeError(absl::StrFormat("n must be >= 1, got %d", n));
  }
  if (absl::Status s = CheckConstants(consts); !s.ok()) return s;
  return ClampUnit(consts.a * GeometricSum(consts, n) /
                   static_cast<double>(n));
}

absl::StatusOr<double> FixedLaplaceScale(int64_t n, const ScheduleSpec& sched,
                                         const LossProfile& profile,
                                         const GeometrySpec& geometry) {
  if (n < 1) return absl::OutOfRangeError("n must be >= 1");
  absl::StatusOr<ResolvedSchedule> s =
      ResolveSchedule(sched, ScheduleMode::kFixed);
  if (!s.ok()) return s.status();
  absl::StatusOr<double> numerator =
      ScheduleNumerator(profile, geometry, NoiseKind::kLaplace);
  if (!numerator.ok()) return numerator.status();
  const double argument = static_cast<double>(n) / s->c1 + s->c2;
  return LaplaceScaleFromLogArgument(*numerator, std::log(argument));
}

absl::StatusOr<double> FixedGaussianScale(int64_t n, const ScheduleSpec& sched,
                                          const LossProfile& profile,
                                          const GeometrySpec& geometry) {
  if (n < 1) return absl::OutOfRangeError("n must be >= 1");
  absl::StatusOr<ResolvedSchedule> s =
      ResolveSchedule(sched, ScheduleMode::kFixed);
  if (!s.ok()) return s.status();
  absl::StatusOr<double> numerator =
      ScheduleNumerator(profile, geometry, NoiseKind::kGaussian);
  if (!numerator.ok()) return numerator.status();
  const double ratio = static_cast<double>(n) / s->c1;
  const double argument = ratio * ratio / (2.0 * std::numbers::pi) + s->c2;
  return GaussianScaleFromLogArgument(*numerator, std::log(argument));
}

absl::StatusOr<double> DeltaStarFixedLaplace(double epsilon, double c1) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (!(c1 > 0.0) || !std::isfinite(c1)) {
    return absl::InvalidArgumentError("C1 must be > 0");
  }
  const double x = c1 * std::exp(0.5 * epsilon);
  return ClampUnit(-std::expm1(-x) / x);
}

absl::StatusOr<double> DeltaStarFixedGaussian(double epsilon, double c1) {
  if (!(c1 > 0.0) || !std::isfinite(c1)) {
    return absl::InvalidArgumentError("C1 must be > 0");
  }
  return DeltaStarFixedLaplace(epsilon, 2.0 * c1);
}

absl::StatusOr<FixedNoiseBound> ShuffledDeltaFixedNoise(
    int64_t n, double epsilon, const ScheduleSpec& sched,
    const LossProfile& profile, const GeometrySpec& geometry, NoiseKind kind) {
  absl::StatusOr<double> scale =
      kind == NoiseKind::kLaplace
          ? FixedLaplaceScale(n, sched, profile, geometry)
          : FixedGaussianScale(n, sched, profile, geometry);
  if (!scale.ok()) return scale.status();
  absl::StatusOr<BoundConstants> consts =
      AbConstants({kind, *scale}, profile, geometry, epsilon);
  if (!consts.ok()) return consts.status();
  absl::StatusOr<double> delta = ShuffledDelta(*consts, n);
  if (!delta.ok()) return delta.status();
  return FixedNoiseBound{*scale, *consts, *delta};
}

absl::StatusOr<double> OnlineScale(int64_t j, const ScheduleSpec& sched,
                                   const LossProfile& profile,
                                   const GeometrySpec& geometry,
                                   NoiseKind kind) {
  if (j < 1) return absl::OutOfRangeError("update index j must be >= 1");
  absl::StatusOr<ResolvedSchedule> s =
      ResolveSchedule(sched, ScheduleMode::kOnline);
  if (!s.ok()) return s.status();
  absl::StatusOr<double> numerator = ScheduleNumerator(profile, geometry, kind);
  if (!numerator.ok()) return numerator.status();
  const double x = static_cast<double>(j);
  if (kind == NoiseKind::kLaplace) {
    return LaplaceScaleFromLogArgument(*numerator,
                                       OnlineLaplaceLogArgument(x, *s));
  }
  return GaussianScaleFromLogArgument(*numerator,
                                      OnlineGaussianLogArgument(x, *s));
}

absl::StatusOr<std::vector<double>> OnlineDeltaFiniteSeries(
    std::span<const int64_t> ns, int64_t i, double epsilon,
    const ScheduleSpec& sched, const LossProfile& profile,
    const GeometrySpec& geometry, NoiseKind kind) {
  if (ns.empty()) return std::vector<double>{};
  if (!std::is_sorted(ns.begin(), ns.end())) {
    return absl::InvalidArgumentError("n grid must be ascending");
  }
  if (absl::Status s = CheckIndex(ns.front(), i); !s.ok()) return s;
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (absl::Status s = CheckProfile(profile); !s.ok()) return s;

  absl::StatusOr<double> scale_i =
      OnlineScale(i, sched, profile, geometry, kind);
  if (!scale_i.ok()) return scale_i.status();
  absl::StatusOr<BoundConstants> consts_i =
      AbConstants({kind, *scale_i}, profile, geometry, epsilon);
  if (!consts_i.ok()) return consts_i.status();
  const double a_i = consts_i->a;

  const double m = *ContractionM(profile);
  const double extent = geometry.Extent();
  const double eta = profile.learning_rate;

  std::vector<double> out;
  out.reserve(ns.size());
  long double log_product = 0.0L;
  bool annihilated = a_i == 0.0;
  int64_t t = i;
  for (int64_t n : ns) {
    for (; t < n && !annihilated; ) {
      ++t;
      absl::StatusOr<double> scale_t =
          OnlineScale(t, sched, profile, geometry, kind);
      if (!scale_t.ok()) return scale_t.status();
      absl::StatusOr<double> deficit =
          ContractionDeficit(kind, *scale_t, m, extent, eta, epsilon);
      if (!deficit.ok()) return deficit.status();
      if (*deficit >= 1.0) {
        annihilated = true;
        break;
      }
      log_product += std::log1p(-*deficit);
    }
    if (annihilated) {
      out.push_back(0.0);
    } else {
      out.push_back(
          ClampUnit(a_i * std::exp(static_cast<double>(log_product))));
    }
  }
  return out;
}

absl::StatusOr<double> OnlineDeltaFinite(int64_t n, int64_t i, double epsilon,
                                         const ScheduleSpec& sched,
                                         const LossProfile& profile,
                                         const GeometrySpec& geometry,
                                         NoiseKind kind) {
  if (absl::Status s = CheckIndex(n, i); !s.ok()) return s;
  const int64_t grid[] = {n};
  absl::StatusOr<std::vector<double>> series = OnlineDeltaFiniteSeries(
      grid, i, epsilon, sched, profile, geometry, kind);
  if (!series.ok()) return series.status();
  return series->front();
}

absl::StatusOr<OnlineLimitBracket> OnlineDeltaLimitBracket(
    int64_t i, double epsilon, const ScheduleSpec& sched,
    const LossProfile& profile, const GeometrySpec& geometry, NoiseKind kind) {
  if (i < 1) return absl::OutOfRangeError("index i must be >= 1");
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  absl::StatusOr<ResolvedSchedule> sched_or =
      ResolveSchedule(sched, ScheduleMode::kOnline);
  if (!sched_or.ok()) return sched_or.status();
  const ResolvedSchedule s = *sched_or;

  absl::StatusOr<double> scale_i =
      OnlineScale(i, sched, profile, geometry, kind);
  if (!scale_i.ok()) return scale_i.status();
  absl::StatusOr<BoundConstants> consts_i =
      AbConstants({kind, *scale_i}, profile, geometry, epsilon);
  if (!consts_i.ok()) return consts_i.status();

  OnlineLimitBracket bracket;
  bracket.a_i = consts_i->a;
  if (bracket.a_i == 0.0) return bracket;

  const double x_upper = static_cast<double>(i) + 1.0;
  const double x_lower = static_cast<double>(i);

  // The deficit decreases in x, so the integrand is defined everywhere on
  // [x0, inf) iff it is defined at x0.
  absl::StatusOr<double> deficit_upper =
      OnlineDeficit(x_upper, epsilon, s, kind);
  if (!deficit_upper.ok()) return deficit_upper.status();
  if (*deficit_upper >= 1.0) return bracket;

  auto integrand = [&](double x) -> absl::StatusOr<double> {
    absl::StatusOr<double> d = OnlineDeficit(x, epsilon, s, kind);
    if (!d.ok()) return d.status();
    if (*d >= 1.0) {
      return absl::FailedPreconditionError("online integrand undefined");
    }
    return std::log1p(-*d);
  };
  // Substituting x = e^u turns the algebraic tail into an exponential one and
  // lets fixed-width panels cover any number of decades.
  auto integrand_log_x = [&](double u) -> absl::StatusOr<double> {
    const double x = std::exp(u);
    absl::StatusOr<double> g = integrand(x);
    if (!g.ok()) return g.status();
    return *g * x;
  };

  const double envelope_log_scale = std::log(TailEnvelopeConstant(kind) *
                                             s.c1) +
                                    0.5 * epsilon - std::log(s.alpha - 1.0);
  double integral = 0.0;
  double error = 0.0;
  double u = std::log(x_upper);
  bool converged = false;
  for (int panel = 0; panel < kMaxPanels; ++panel) {
    absl::StatusOr<QuadratureResult> piece =
        Integrate(integrand_log_x, u, u + 1.0);
    if (!piece.ok()) return piece.status();
    integral += piece->value;
    error += piece->error;
    u += 1.0;
    absl::StatusOr<bool> holds =
        TailEnvelopeHolds(std::exp(u), epsilon, s, kind);
    if (!holds.ok()) return holds.status();
    if (!*holds) continue;
    const double tail = std::exp(envelope_log_scale + (1.0 - s.alpha) * u);
    if (tail < kTailRelativeTolerance * std::abs(integral) ||
        tail < std::numeric_limits<double>::min()) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    return absl::InternalError(
        "online limit: tail bound not reached within the panel budget");
  }
  if (error > kQuadratureRelativeTolerance * std::abs(integral) + 1e-300) {
    return absl::InternalError(absl::StrFormat(
        "online limit: quadrature error %g too large for integral %g", error,
        integral));
  }
  bracket.truncation_point = std::exp(u);
  bracket.log_integral_upper = integral;
  bracket.upper = ClampUnit(std::exp(std::log(bracket.a_i) + integral));

  absl::StatusOr<double> deficit_lower =
      OnlineDeficit(x_lower, epsilon, s, kind);
  if (!deficit_lower.ok()) return deficit_lower.status();
  if (*deficit_lower >= 1.0) {
    bracket.log_integral_lower = -std::numeric_limits<double>::infinity();
    bracket.lower = 0.0;
    return bracket;
  }
  absl::StatusOr<QuadratureResult> head =
      Integrate(integrand, x_lower, x_upper);
  if (!head.ok()) return head.status();
  bracket.log_integral_lower = integral + head->value;
  bracket.lower =
      ClampUnit(std::exp(std::log(bracket.a_i) + bracket.log_integral_lower));
  return bracket;
}

absl::StatusOr<double> OnlineDeltaLimitUpper(int64_t i, double epsilon,
                                             const ScheduleSpec& sched,
                                             const LossProfile& profile,
                                             const GeometrySpec& geometry,
                                             NoiseKind kind) {
  absl::StatusOr<OnlineLimitBracket> b =
      OnlineDeltaLimitBracket(i, epsilon, sched, profile, geometry, kind);
  if (!b.ok()) return b.status();
  return b->upper;
}

absl::StatusOr<double> OnlineDeltaLimitLower(int64_t i, double epsilon,
                                             const ScheduleSpec& sched,
                                             const LossProfile& profile,
                                             const GeometrySpec& geometry,
                                             NoiseKind kind) {
  absl::StatusOr<OnlineLimitBracket> b =
      OnlineDeltaLimitBracket(i, epsilon, sched, profile, geometry, kind);
  if (!b.ok()) return b.status();
  return b->lower;
}

}  // namespace pnsgd
