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

#ifndef PNSGD_RANDOM_H_
#define PNSGD_RANDOM_H_

#include <cstdint>

namespace pnsgd {

// Independent random streams within one replica.
enum class StreamPurpose : uint64_t {
  kNoise = 1,
  kPermutation = 2,
  kStoppingTime = 3,
  kData = 4,
};

struct StreamKey {
  uint64_t seed = 0;
  uint64_t replica = 0;
  StreamPurpose purpose = StreamPurpose::kNoise;
};

// Counter-based generator: every draw is a pure function of (key, counter),
// so a variant that skips draws for one purpose never shifts another's.
// Mixing uses the SplitMix64 finalizer.
uint64_t CounterBits(const StreamKey& key, uint64_t counter);

// Uniform on the open interval (0, 1) with 53 random bits.
double CounterUniform(const StreamKey& key, uint64_t counter);

// Standard normal via Box-Muller on counters 2k and 2k + 1.
double CounterNormal(const StreamKey& key, uint64_t k);

}  // namespace pnsgd

#endif  // PNSGD_RANDOM_H_
