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

#ifndef PNSGD_TOOLS_OUTPUT_H_
#define PNSGD_TOOLS_OUTPUT_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"

namespace pnsgd::cli {

enum class Format { kCsv, kJson };

// monostate renders as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, double, int64_t, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Everything a command produces. `notes` land in the manifest only.
struct Report {
  std::vector<Table> tables;
  std::vector<std::string> notes;
};

// 17 significant digits.
std::string FormatDouble(double x);

std::string RenderCsv(const Table& table);
// A single table renders as one object; several as an array of objects.
std::string RenderJson(const std::vector<Table>& tables);

// Files written for `out`: one per table when there are several, named
// <stem>.<table name><ext>.
std::vector<std::string> OutputPaths(const std::string& out,
                                     const std::vector<Table>& tables);

struct ManifestInfo {
  std::vector<std::string> command_line;
  std::string config_path;
  std::string config_sha256;
  uint64_t seed = 0;
  std::vector<std::string> notes;
};

std::string Sha256Hex(const std::string& bytes);

// Writes the payload and its <path>.manifest.json sidecar.
absl::Status WriteWithManifest(const std::string& path,
                               const std::string& payload,
                               const ManifestInfo& info);

}  // namespace pnsgd::cli

#endif  // PNSGD_TOOLS_OUTPUT_H_
