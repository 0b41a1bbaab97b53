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

#ifndef PNSGD_TOOLS_PARALLEL_H_
#define PNSGD_TOOLS_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace pnsgd::cli {

// Calls fn(k) for k in [0, count) on up to `workers` threads. Callers write
// into slot k, so results come back in index order.
template <typename Fn>
void ParallelFor(int64_t count, int workers, Fn&& fn) {
  const int64_t threads = std::min<int64_t>(std::max(workers, 1), count);
  if (threads <= 1) {
    for (int64_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<int64_t> next{0};
  std::vector<std::jthread> pool;
  for (int64_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int64_t k = next++; k < count; k = next++) fn(k);
    });
  }
}

}  // namespace pnsgd::cli

#endif  // PNSGD_TOOLS_PARALLEL_H_
