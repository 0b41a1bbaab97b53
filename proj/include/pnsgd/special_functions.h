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

#ifndef PNSGD_SPECIAL_FUNCTIONS_H_
#define PNSGD_SPECIAL_FUNCTIONS_H_

#include "absl/status/statusor.h"

namespace pnsgd {

// Loss-function regularity and learning rate of a PNSGD run.
struct LossProfile {
  double lipschitz = 0.0;        // L
  double smoothness = 0.0;       // beta
  double strong_convexity = 0.0; // rho
  double learning_rate = 0.0;    // eta
};

// Gaussian upper tail Q(t) = 1 - Phi(t). Keeps full relative accuracy in the
// upper tail until the result underflows (t > ~38.4).
double QFunction(double t);

// log Q(t), finite for every finite t. Uses an asymptotic continued expansion
// once erfc underflows.
double LogQFunction(double t);

// theta_gamma(r) = Q(log(gamma)/r - r/2) - gamma * Q(log(gamma)/r + r/2).
//
// This is the hockey-stick divergence E_gamma(N(0, 1) || N(r, 1)). Fails with
// InvalidArgument if gamma < 1, r <= 0, or either argument is not finite.
absl::StatusOr<double> Theta(double gamma, double r);

// Same as Theta() but parameterised by epsilon = log(gamma), which avoids
// forming gamma when epsilon is large.
absl::StatusOr<double> ThetaFromEpsilon(double epsilon, double r);

// 1 - theta, evaluated as a sum of two positive tails so that it keeps
// relative accuracy when theta is within rounding of 1.
absl::StatusOr<double> ThetaComplementFromEpsilon(double epsilon, double r);

// Brute-force hockey-stick divergence between N(0, sigma^2) and
// N(shift, sigma^2) by adaptive quadrature of (p - gamma q)_+. Test oracle for
// Theta(gamma, |shift| / sigma); it does not share any code with Theta().
absl::StatusOr<double> DivergenceOracle(double gamma, double shift,
                                        double sigma);

// Principal branch of the Lambert W function on [0, inf).
absl::StatusOr<double> LambertW0(double x);

// W0(exp(log_x)) for arguments too large to represent directly.
absl::StatusOr<double> LambertW0FromLog(double log_x);

// M = sqrt(1 - 2 eta beta rho / (beta + rho)).
absl::StatusOr<double> ContractionM(const LossProfile& profile);

// Leading-order small-sigma expansion of theta_{e^epsilon}(c / sigma):
//   1 - e^{epsilon/2} e^{-c^2 / (8 sigma^2)} (4 sigma / c) / sqrt(2 pi).
// Only used as a comparator for Theta().
absl::StatusOr<double> ThetaAsymptotic(double epsilon, double c, double sigma);

// The deficit 1 - ThetaAsymptotic(), without the cancellation against 1.
absl::StatusOr<double> ThetaAsymptoticDeficit(double epsilon, double c,
                                              double sigma);

}  // namespace pnsgd

#endif  // PNSGD_SPECIAL_FUNCTIONS_H_
