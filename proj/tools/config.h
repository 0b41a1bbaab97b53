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

#ifndef PNSGD_TOOLS_CONFIG_H_
#define PNSGD_TOOLS_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pnsgd/privacy_bounds.h"
#include "pnsgd/special_functions.h"
#include "yaml-cpp/yaml.h"

namespace pnsgd::cli {

// A YAML config file. Fields are addressed by dotted paths ("profile.eta");
// every error names the file, the line and the field.
class Config {
 public:
  static absl::StatusOr<Config> Load(const std::string& path);
  static absl::StatusOr<Config> FromString(const std::string& text,
                                           const std::string& label);

  const std::string& path() const { return path_; }
  const std::string& text() const { return text_; }

  bool Has(absl::string_view field) const;

  absl::StatusOr<double> Double(absl::string_view field) const;
  absl::StatusOr<double> Double(absl::string_view field, double fallback) const;
  // Integral values; scientific notation such as 1e7 is accepted.
  absl::StatusOr<int64_t> Int(absl::string_view field) const;
  absl::StatusOr<int64_t> Int(absl::string_view field, int64_t fallback) const;
  absl::StatusOr<std::string> String(absl::string_view field) const;
  absl::StatusOr<std::string> String(absl::string_view field,
                                     std::string fallback) const;
  // A scalar is read as a one-element list.
  absl::StatusOr<std::vector<double>> DoubleList(absl::string_view field) const;
  absl::StatusOr<std::vector<int64_t>> IntList(absl::string_view field) const;

  absl::Status Error(absl::string_view field, absl::string_view message) const;

 private:
  Config(std::string path, std::string text, YAML::Node root)
      : path_(std::move(path)), text_(std::move(text)), root_(root) {}

  // The node at `field`, or the deepest existing ancestor with found=false.
  struct Lookup {
    YAML::Node node;
    bool found = false;
  };
  Lookup Find(absl::string_view field) const;
  absl::StatusOr<YAML::Node> Require(absl::string_view field) const;
  absl::StatusOr<double> ParseDouble(absl::string_view field,
                                     const YAML::Node& node) const;
  absl::StatusOr<int64_t> ParseInt(absl::string_view field,
                                   const YAML::Node& node) const;

  std::string path_;
  std::string text_;
  YAML::Node root_;
};

// Domain pieces shared by the commands.
absl::StatusOr<NoiseKind> ReadNoiseKind(const Config& config);
absl::StatusOr<LossProfile> ReadProfile(const Config& config);
// One profile per entry of profile.eta, which may be a list.
absl::StatusOr<std::vector<LossProfile>> ReadProfiles(const Config& config);
// Interval {a, b} for Laplace, ball {D_K} for Gaussian.
absl::StatusOr<GeometrySpec> ReadGeometry(const Config& config,
                                          NoiseKind kind);
absl::StatusOr<ScheduleSpec> ReadSchedule(const Config& config);

}  // namespace pnsgd::cli

#endif  // PNSGD_TOOLS_CONFIG_H_
