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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "boost/math/quadrature/gauss_kronrod.hpp"

namespace pnsgd {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))

// Past this point erfc(t / sqrt(2)) is close to underflow and the asymptotic
// series for log Q converges to full double precision in a handful of terms.
constexpr double kLogQAsymptoticCutoff = 30.0;

constexpr int kLambertMaxIterations = 50;

bool IsFinite(double x) { return std::isfinite(x); }

// log(e^x - 1) for x > 0.
double LogExpm1(double x) {
  if (x > 1.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}

// Q(a) - Q(b) for a <= b, choosing erf or erfc so that the two terms never
// cancel in their leading digits.
double TailDifference(double a, double b) {
  if (a >= 0.0) {
    return 0.5 * (std::erfc(a / kSqrt2) - std::erfc(b / kSqrt2));
  }
  if (b <= 0.0) {
    return 0.5 * (std::erfc(-b / kSqrt2) - std::erfc(-a / kSqrt2));
  }
  return 0.5 * (std::erf(b / kSqrt2) - std::erf(a / kSqrt2));
}

absl::Status CheckThetaArgs(double epsilon, double r) {
  if (!IsFinite(epsilon) || !IsFinite(r)) {
    return absl::InvalidArgumentError("theta: arguments must be finite");
  }
  if (epsilon < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("theta: gamma must be >= 1, got log(gamma) = %g",
                        epsilon));
  }
  if (r <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("theta: r must be > 0, got %g", r));
  }
  return absl::OkStatus();
}

// Halley iteration for w e^w = x started from `w`.
absl::StatusOr<double> HalleyW0(double x, double w) {
  for (int iter = 0; iter < kLambertMaxIterations; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() *
                              std::max(1.0, std::abs(w))) {
      return w;
    }
  }
  return absl::InternalError(
      absl::StrFormat("lambert_w0: no convergence for x = %g", x));
}

}  // namespace

double QFunction(double t) { return 0.5 * std::erfc(t / kSqrt2); }

double LogQFunction(double t) {
  if (t < 0.0) return std::log1p(-QFunction(-t));
  if (t < kLogQAsymptoticCutoff) return std::log(QFunction(t));
  // Q(t) = phi(t) / t * (1 - 1/t^2 + 3/t^4 - 15/t^6 + ...).
  const double inv_t2 = 1.0 / (t * t);
  double term = 1.0;
  double series = 1.0;
  for (int k = 1; k < 20; ++k) {
    term *= -(2.0 * k - 1.0) * inv_t2;
    series += term;
    if (std::abs(term) < 1e-18) break;
  }
  return -0.5 * t * t - std::log(t) - kLogSqrt2Pi + std::log(series);
}

absl::StatusOr<double> Theta(double gamma, double r) {
  if (!IsFinite(gamma) || gamma < 1.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("theta: gamma must be finite and >= 1, got %g", gamma));
  }
  return ThetaFromEpsilon(std::log(gamma), r);
}

absl::StatusOr<double> ThetaFromEpsilon(double epsilon, double r) {
  if (absl::Status s = CheckThetaArgs(epsilon, r); !s.ok()) return s;
  const double a = epsilon / r - 0.5 * r;
  const double b = epsilon / r + 0.5 * r;
  // theta = [Q(a) - Q(b)] - (gamma - 1) Q(b); the second product is formed
  // in log space so that a huge gamma times a tiny tail does not overflow.
  double value = TailDifference(a, b);
  if (epsilon > 0.0) {
    const double log_q_b = LogQFunction(b);
    value -= std::exp(LogExpm1(epsilon) + log_q_b);
  }
  return std::clamp(value, 0.0, 1.0);
}

absl::StatusOr<double> ThetaComplementFromEpsilon(double epsilon, double r) {
  if (absl::Status s = CheckThetaArgs(epsilon, r); !s.ok()) return s;
  const double a = epsilon / r - 0.5 * r;
  const double b = epsilon / r + 0.5 * r;
  const double value = QFunction(-a) + std::exp(epsilon + LogQFunction(b));
  return std::clamp(value, 0.0, 1.0);
}

absl::StatusOr<double> DivergenceOracle(double gamma, double shift,
                                        double sigma) {
  constexpr double kAbsTolerance = 1e-10;
  constexpr double kSupportWidth = 12.0;
  constexpr unsigned kMaxDepth = 10;
  if (!IsFinite(gamma) || gamma < 1.0) {
    return absl::InvalidArgumentError("divergence_oracle: gamma must be >= 1");
  }
  if (!IsFinite(sigma) || sigma <= 0.0) {
    return absl::InvalidArgumentError("divergence_oracle: sigma must be > 0");
  }
  if (!IsFinite(shift)) {
    return absl::InvalidArgumentError("divergence_oracle: shift not finite");
  }
  // The divergence is symmetric under reflecting both means.
  const double s = std::abs(shift);
  if (s == 0.0) return 0.0;

  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  auto integrand = [&](double x) {
    const double zp = x / sigma;
    const double zq = (x - s) / sigma;
    const double diff =
        norm * (std::exp(-0.5 * zp * zp) - gamma * std::exp(-0.5 * zq * zq));
    return std::max(diff, 0.0);
  };

  // p >= gamma q exactly left of the crossing point, where the integrand
  // has a kink. Integrate up to it and no further.
  const double crossing = 0.5 * s - sigma * sigma * std::log(gamma) / s;
  const double lo = -kSupportWidth * sigma;
  const double hi = std::min(crossing, s + kSupportWidth * sigma);
  if (hi <= lo) return 0.0;

  // sigma-wide panels keep each Gauss-Kronrod rule on a nearly polynomial
  // stretch of the densities.
  double total = 0.0;
  double total_error = 0.0;
  for (double left = lo; left < hi; left += sigma) {
    const double right = std::min(left + sigma, hi);
    double error = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, left, right, kMaxDepth, 1e-12, &error);
    total_error += error;
  }
  if (total_error > kAbsTolerance) {
    return absl::InternalError(absl::StrFormat(
        "divergence_oracle: quadrature error estimate %g exceeds %g",
        total_error, kAbsTolerance));
  }
  return std::clamp(total, 0.0, 1.0);
}

absl::StatusOr<double> LambertW0(double x) {
  if (std::isnan(x) || x < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("lambert_w0: x must be >= 0, got %g", x));
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  if (x > 1e300) return LambertW0FromLog(std::log(x));
  const double guess = x < std::numbers::e
                           ? std::log1p(x)
                           : std::log(x) - std::log(std::log(x));
  return HalleyW0(x, guess);
}

absl::StatusOr<double> LambertW0FromLog(double log_x) {
  if (std::isnan(log_x)) {
    return absl::InvalidArgumentError("lambert_w0: log argument is NaN");
  }
  if (log_x < 600.0) return LambertW0(std::exp(log_x));
  // Newton on w + log(w) = log_x; the function is concave and increasing so
  // the iteration is monotone from the standard seed.
  double w = log_x - std::log(log_x);
  for (int iter = 0; iter < kLambertMaxIterations; ++iter) {
    const double f = w + std::log(w) - log_x;
    const double step = f / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * w) {
      return w;
    }
  }
  return absl::InternalError("lambert_w0: no convergence for large argument");
}

absl::StatusOr<double> ContractionM(const LossProfile& profile) {
  const double beta = profile.smoothness;
  const double rho = profile.strong_convexity;
  const double eta = profile.learning_rate;
  if (!(beta > 0.0) || !(rho >= 0.0) || !(eta > 0.0) || !IsFinite(beta) ||
      !IsFinite(rho) || !IsFinite(eta)) {
    return absl::InvalidArgumentError(
        "contraction_m: need beta > 0, rho >= 0, eta > 0");
  }
  const double ratio = rho == 0.0 ? 0.0 : 2.0 * eta * beta * rho / (beta + rho);
  const double radicand = 1.0 - ratio;
  if (radicand < 0.0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "contraction_m: 2 eta beta rho / (beta + rho) = %g exceeds 1", ratio));
  }
  return std::sqrt(radicand);
}

absl::StatusOr<double> ThetaAsymptoticDeficit(double epsilon, double c,
                                              double sigma) {
  if (!IsFinite(epsilon) || !(c > 0.0) || !(sigma > 0.0) || !IsFinite(c) ||
      !IsFinite(sigma)) {
    return absl::InvalidArgumentError(
        "theta_asymptotic: need finite epsilon, c > 0, sigma > 0");
  }
  const double log_deficit = 0.5 * epsilon - c * c / (8.0 * sigma * sigma) +
                             std::log(4.0 * sigma / c) - kLogSqrt2Pi;
  return std::exp(log_deficit);
}

absl::StatusOr<double> ThetaAsymptotic(double epsilon, double c,
                                       double sigma) {
  absl::StatusOr<double> deficit = ThetaAsymptoticDeficit(epsilon, c, sigma);
  if (!deficit.ok()) return deficit.status();
  return 1.0 - *deficit;
}

}  // namespace pnsgd
