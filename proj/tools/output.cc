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

#include "output.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "fmt/chrono.h"
#include "fmt/format.h"
#include "json.hpp"
#include "openssl/evp.h"

#ifndef PNSGD_VERSION
#define PNSGD_VERSION "unknown"
#endif

namespace pnsgd::cli {
namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string CsvCell(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return "";
  if (const double* x = std::get_if<double>(&cell)) return FormatDouble(*x);
  if (const int64_t* k = std::get_if<int64_t>(&cell)) return fmt::format("{}", *k);
  return CsvField(std::get<std::string>(cell));
}

std::string JsonCell(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return "null";
  if (const double* x = std::get_if<double>(&cell)) {
    return std::isfinite(*x) ? FormatDouble(*x) : "null";
  }
  if (const int64_t* k = std::get_if<int64_t>(&cell)) return fmt::format("{}", *k);
  return nlohmann::json(std::get<std::string>(cell)).dump();
}

std::string JsonTable(const Table& table, const std::string& indent) {
  std::string out = indent + "{\n";
  absl::StrAppend(&out, indent, "  \"name\": ", nlohmann::json(table.name).dump(),
                  ",\n", indent, "  \"rows\": [");
  for (size_t r = 0; r < table.rows.size(); ++r) {
    absl::StrAppend(&out, r == 0 ? "\n" : ",\n", indent, "    {");
    for (size_t c = 0; c < table.columns.size(); ++c) {
      absl::StrAppend(&out, c == 0 ? "" : ", ",
                      nlohmann::json(table.columns[c]).dump(), ": ",
                      JsonCell(table.rows[r][c]));
    }
    out += "}";
  }
  absl::StrAppend(&out, table.rows.empty() ? "" : "\n" + indent + "  ", "]\n",
                  indent, "}");
  return out;
}

}  // namespace

std::string FormatDouble(double x) { return fmt::format("{:.17g}", x); }

std::string RenderCsv(const Table& table) {
  std::string out = absl::StrJoin(table.columns, ",", [](std::string* o,
                                                         const std::string& c) {
    o->append(CsvField(c));
  });
  out += "\n";
  for (const auto& row : table.rows) {
    out += absl::StrJoin(row, ",", [](std::string* o, const Cell& c) {
      o->append(CsvCell(c));
    });
    out += "\n";
  }
  return out;
}

std::string RenderJson(const std::vector<Table>& tables) {
  if (tables.size() == 1) return JsonTable(tables[0], "") + "\n";
  std::string out = "[\n";
  for (size_t k = 0; k < tables.size(); ++k) {
    absl::StrAppend(&out, k == 0 ? "" : ",\n", JsonTable(tables[k], "  "));
  }
  return out + "\n]\n";
}

std::vector<std::string> OutputPaths(const std::string& out,
                                     const std::vector<Table>& tables) {
  if (tables.size() == 1) return {out};
  const std::filesystem::path p(out);
  std::vector<std::string> paths;
  for (const Table& t : tables) {
    std::filesystem::path each = p;
    each.replace_filename(p.stem().string() + "." + t.name +
                          p.extension().string());
    paths.push_back(each.string());
  }
  return paths;
}

std::string Sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", digest[k]);
  return hex;
}

absl::Status WriteWithManifest(const std::string& path,
                               const std::string& payload,
                               const ManifestInfo& info) {
  {
    std::ofstream f(path, std::ios::binary);
    f << payload;
    if (!f) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  }
  nlohmann::ordered_json m;
  m["command_line"] = info.command_line;
  m["config_path"] = info.config_path;
  m["config_sha256"] = info.config_sha256;
  m["seed"] = info.seed;
  m["version"] = PNSGD_VERSION;
  m["timestamp"] = fmt::format(
      "{:%Y-%m-%dT%H:%M:%SZ}",
      fmt::gmtime(std::chrono::system_clock::to_time_t(
          std::chrono::system_clock::now())));
  m["payload_sha256"] = Sha256Hex(payload);
  m["notes"] = info.notes;
  const std::string manifest_path = path + ".manifest.json";
  std::ofstream f(manifest_path, std::ios::binary);
  f << m.dump(2) << "\n";
  if (!f) {
    return absl::UnavailableError(absl::StrCat("cannot write ", manifest_path));
  }
  return absl::OkStatus();
}

}  // namespace pnsgd::cli
