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

#include "config.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace pnsgd::cli {

absl::StatusOr<Config> Config::Load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return absl::NotFoundError(absl::StrCat(path, ": cannot open config"));
  std::stringstream buffer;
  buffer << f.rdbuf();
  return FromString(buffer.str(), path);
}

absl::StatusOr<Config> Config::FromString(const std::string& text,
                                          const std::string& label) {
  try {
    YAML::Node root = YAML::Load(text);
    if (!root.IsMap()) {
      return absl::InvalidArgumentError(
          absl::StrCat(label, ": top level must be a mapping"));
    }
    return Config(label, text, root);
  } catch (const YAML::Exception& e) {
    return absl::InvalidArgumentError(absl::StrCat(
        label, ":", e.mark.line + 1, ": ", e.msg));
  }
}

Config::Lookup Config::Find(absl::string_view field) const {
  // Node::reset rebinds instead of assigning through, which would mutate
  // the tree.
  YAML::Node node;
  node.reset(root_);
  for (absl::string_view key : absl::StrSplit(field, '.')) {
    if (!node.IsMap()) return {node, false};
    const YAML::Node child = node[std::string(key)];
    if (!child.IsDefined() || child.IsNull()) return {node, false};
    node.reset(child);
  }
  return {node, true};
}

bool Config::Has(absl::string_view field) const { return Find(field).found; }

absl::Status Config::Error(absl::string_view field,
                           absl::string_view message) const {
  const YAML::Node node = Find(field).node;
  const int line = node.Mark().line;
  return absl::InvalidArgumentError(
      absl::StrCat(path_, line >= 0 ? absl::StrCat(":", line + 1) : "",
                   ": field '", field, "': ", message));
}

absl::StatusOr<YAML::Node> Config::Require(absl::string_view field) const {
  Lookup found = Find(field);
  if (!found.found) return Error(field, "missing required field");
  return found.node;
}

absl::StatusOr<double> Config::ParseDouble(absl::string_view field,
                                           const YAML::Node& node) const {
  double x = 0.0;
  if (!node.IsScalar() || !absl::SimpleAtod(node.Scalar(), &x)) {
    return Error(field, "expected a number");
  }
  if (!std::isfinite(x)) return Error(field, "expected a finite number");
  return x;
}

absl::StatusOr<int64_t> Config::ParseInt(absl::string_view field,
                                         const YAML::Node& node) const {
  absl::StatusOr<double> x = ParseDouble(field, node);
  if (!x.ok()) return x.status();
  if (*x != std::floor(*x) || std::fabs(*x) > 9.0e15) {
    return Error(field, "expected an integer");
  }
  return static_cast<int64_t>(*x);
}

absl::StatusOr<double> Config::Double(absl::string_view field) const {
  absl::StatusOr<YAML::Node> node = Require(field);
  if (!node.ok()) return node.status();
  return ParseDouble(field, *node);
}

absl::StatusOr<double> Config::Double(absl::string_view field,
                                      double fallback) const {
  if (!Has(field)) return fallback;
  return Double(field);
}

absl::StatusOr<int64_t> Config::Int(absl::string_view field) const {
  absl::StatusOr<YAML::Node> node = Require(field);
  if (!node.ok()) return node.status();
  return ParseInt(field, *node);
}

absl::StatusOr<int64_t> Config::Int(absl::string_view field,
                                    int64_t fallback) const {
  if (!Has(field)) return fallback;
  return Int(field);
}

absl::StatusOr<std::string> Config::String(absl::string_view field) const {
  absl::StatusOr<YAML::Node> node = Require(field);
  if (!node.ok()) return node.status();
  if (!node->IsScalar()) return Error(field, "expected a string");
  return node->Scalar();
}

absl::StatusOr<std::string> Config::String(absl::string_view field,
                                           std::string fallback) const {
  if (!Has(field)) return fallback;
  return String(field);
}

absl::StatusOr<std::vector<double>> Config::DoubleList(
    absl::string_view field) const {
  absl::StatusOr<YAML::Node> node = Require(field);
  if (!node.ok()) return node.status();
  std::vector<double> out;
  if (node->IsScalar()) {
    absl::StatusOr<double> x = ParseDouble(field, *node);
    if (!x.ok()) return x.status();
    out.push_back(*x);
    return out;
  }
  if (!node->IsSequence()) return Error(field, "expected a number or a list");
  for (const YAML::Node& item : *node) {
    absl::StatusOr<double> x = ParseDouble(field, item);
    if (!x.ok()) return x.status();
    out.push_back(*x);
  }
  return out;
}

absl::StatusOr<std::vector<int64_t>> Config::IntList(
    absl::string_view field) const {
  absl::StatusOr<YAML::Node> node = Require(field);
  if (!node.ok()) return node.status();
  std::vector<int64_t> out;
  if (node->IsScalar()) {
    absl::StatusOr<int64_t> k = ParseInt(field, *node);
    if (!k.ok()) return k.status();
    out.push_back(*k);
    return out;
  }
  if (!node->IsSequence()) return Error(field, "expected an integer or a list");
  for (const YAML::Node& item : *node) {
    absl::StatusOr<int64_t> k = ParseInt(field, item);
    if (!k.ok()) return k.status();
    out.push_back(*k);
  }
  return out;
}

absl::StatusOr<NoiseKind> ReadNoiseKind(const Config& config) {
  absl::StatusOr<std::string> name = config.String("noise");
  if (!name.ok()) return name.status();
  if (*name == "gaussian") return NoiseKind::kGaussian;
  if (*name == "laplace") return NoiseKind::kLaplace;
  return config.Error("noise", "expected 'gaussian' or 'laplace'");
}

absl::StatusOr<std::vector<LossProfile>> ReadProfiles(const Config& config) {
  LossProfile p;
  absl::StatusOr<double> x = config.Double("profile.L");
  if (!x.ok()) return x.status();
  p.lipschitz = *x;
  if (!(x = config.Double("profile.beta")).ok()) return x.status();
  p.smoothness = *x;
  if (!(x = config.Double("profile.rho", 0.0)).ok()) return x.status();
  p.strong_convexity = *x;
  absl::StatusOr<std::vector<double>> etas = config.DoubleList("profile.eta");
  if (!etas.ok()) return etas.status();
  if (etas->empty()) return config.Error("profile.eta", "empty list");
  std::vector<LossProfile> out;
  for (double eta : *etas) {
    p.learning_rate = eta;
    out.push_back(p);
  }
  return out;
}

absl::StatusOr<LossProfile> ReadProfile(const Config& config) {
  absl::StatusOr<std::vector<LossProfile>> all = ReadProfiles(config);
  if (!all.ok()) return all.status();
  if (all->size() != 1) {
    return config.Error("profile.eta", "expected a single learning rate");
  }
  return all->front();
}

absl::StatusOr<GeometrySpec> ReadGeometry(const Config& config,
                                          NoiseKind kind) {
  if (kind == NoiseKind::kGaussian) {
    absl::StatusOr<double> d = config.Double("geometry.D_K");
    if (!d.ok()) return d.status();
    if (!(*d > 0)) return config.Error("geometry.D_K", "must be positive");
    return GeometrySpec::Ball(*d);
  }
  absl::StatusOr<double> a = config.Double("geometry.a");
  if (!a.ok()) return a.status();
  absl::StatusOr<double> b = config.Double("geometry.b");
  if (!b.ok()) return b.status();
  if (!(*b > *a)) return config.Error("geometry.b", "must exceed geometry.a");
  return GeometrySpec::Interval(*a, *b);
}

absl::StatusOr<ScheduleSpec> ReadSchedule(const Config& config) {
  ScheduleSpec s;
  absl::StatusOr<std::string> mode = config.String("schedule.mode", "fixed");
  if (!mode.ok()) return mode.status();
  if (*mode == "fixed") {
    s.mode = ScheduleMode::kFixed;
  } else if (*mode == "online") {
    s.mode = ScheduleMode::kOnline;
  } else {
    return config.Error("schedule.mode", "expected 'fixed' or 'online'");
  }
  absl::StatusOr<double> x = config.Double("schedule.C1");
  if (!x.ok()) return x.status();
  s.c1 = *x;
  if (!(x = config.Double("schedule.C2")).ok()) return x.status();
  s.c2 = *x;
  if (s.mode == ScheduleMode::kOnline) {
    if (!(x = config.Double("schedule.alpha")).ok()) return x.status();
    s.alpha = *x;
  }
  return s;
}

}  // namespace pnsgd::cli
