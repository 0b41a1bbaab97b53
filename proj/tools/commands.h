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

#ifndef PNSGD_TOOLS_COMMANDS_H_
#define PNSGD_TOOLS_COMMANDS_H_

#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "config.h"
#include "output.h"

namespace pnsgd::cli {

struct CommandOptions {
  uint64_t seed = 0;
  int workers = 1;
};

// Per-index, randomly-stopped and shuffled (eps, delta).
absl::StatusOr<Report> RunAccount(const Config& config,
                                  const CommandOptions& options);
// Noise schedule table plus its limit (fixed) or bracket (online).
absl::StatusOr<Report> RunCalibrate(const Config& config,
                                    const CommandOptions& options);
// Convergence of delta over an n-grid, one table per learning rate.
absl::StatusOr<Report> RunSweep(const Config& config,
                                const CommandOptions& options);
// Multi-epoch budget for E = 1, ..., epochs.
absl::StatusOr<Report> RunCompose(const Config& config,
                                  const CommandOptions& options);
// Paired shuffled / randomly-stopped replicas.
absl::StatusOr<Report> RunSimulate(const Config& config,
                                   const CommandOptions& options);

// 0 for OK, 2 for invalid configuration, 1 for anything else.
int ExitCode(const absl::Status& status);

}  // namespace pnsgd::cli

#endif  // PNSGD_TOOLS_COMMANDS_H_
