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

#include "pnsgd/random.h"

#include <cmath>
#include <numbers>

namespace pnsgd {
namespace {

uint64_t Mix(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

uint64_t CounterBits(const StreamKey& key, uint64_t counter) {
  uint64_t h = Mix(key.seed);
  h = Mix(h ^ key.replica);
  h = Mix(h ^ static_cast<uint64_t>(key.purpose));
  return Mix(h ^ counter);
}

double CounterUniform(const StreamKey& key, uint64_t counter) {
  const uint64_t bits = CounterBits(key, counter) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double CounterNormal(const StreamKey& key, uint64_t k) {
  const double u1 = CounterUniform(key, 2 * k);
  const double u2 = CounterUniform(key, 2 * k + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace pnsgd
