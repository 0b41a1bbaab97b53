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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "fmt/format.h"
#include "parallel.h"
#include "pnsgd/composition.h"
#include "pnsgd/privacy_bounds.h"
#include "pnsgd/simulator.h"
#include "status_macros.h"

namespace pnsgd::cli {
namespace {

// Everything the bound calculations need.
struct BoundSetup {
  NoiseKind kind = NoiseKind::kLaplace;
  LossProfile profile;
  GeometrySpec geometry;
  double epsilon = 0.0;
};

absl::StatusOr<BoundSetup> ReadBoundSetup(const Config& config) {
  BoundSetup s;
  ASSIGN_OR_RETURN(s.kind, ReadNoiseKind(config));
  ASSIGN_OR_RETURN(s.profile, ReadProfile(config));
  ASSIGN_OR_RETURN(s.geometry, ReadGeometry(config, s.kind));
  ASSIGN_OR_RETURN(s.epsilon, config.Double("epsilon"));
  return s;
}

absl::StatusOr<double> FixedScale(int64_t n, const ScheduleSpec& sched,
                                  const BoundSetup& s) {
  return s.kind == NoiseKind::kLaplace
             ? FixedLaplaceScale(n, sched, s.profile, s.geometry)
             : FixedGaussianScale(n, sched, s.profile, s.geometry);
}

absl::StatusOr<double> DeltaStar(const ScheduleSpec& sched,
                                 const BoundSetup& s) {
  return s.kind == NoiseKind::kLaplace
             ? DeltaStarFixedLaplace(s.epsilon, sched.c1)
             : DeltaStarFixedGaussian(s.epsilon, sched.c1);
}

absl::StatusOr<ScheduleSpec> ReadScheduleWithMode(const Config& config,
                                                  ScheduleMode mode) {
  ASSIGN_OR_RETURN(ScheduleSpec sched, ReadSchedule(config));
  if (sched.mode != mode) {
    return config.Error("schedule.mode",
                        mode == ScheduleMode::kFixed ? "expected 'fixed'"
                                                     : "expected 'online'");
  }
  return sched;
}

// Either a constant `scale` or a fixed schedule calibrated at n.
absl::StatusOr<double> ScaleAt(const Config& config, const BoundSetup& s,
                               int64_t n) {
  if (config.Has("scale")) {
    ASSIGN_OR_RETURN(double scale, config.Double("scale"));
    if (!(scale > 0)) return config.Error("scale", "must be positive");
    return scale;
  }
  if (!config.Has("schedule")) {
    return config.Error("scale", "missing; give scale or schedule");
  }
  ASSIGN_OR_RETURN(ScheduleSpec sched,
                   ReadScheduleWithMode(config, ScheduleMode::kFixed));
  return FixedScale(n, sched, s);
}

absl::StatusOr<int64_t> ReadN(const Config& config) {
  ASSIGN_OR_RETURN(int64_t n, config.Int("n"));
  if (n < 1) return config.Error("n", "must be at least 1");
  return n;
}

absl::StatusOr<std::vector<int64_t>> ReadGrid(const Config& config) {
  std::vector<int64_t> grid;
  if (config.Has("grid.n")) {
    ASSIGN_OR_RETURN(grid, config.IntList("grid.n"));
  } else {
    ASSIGN_OR_RETURN(double start, config.Double("grid.start"));
    ASSIGN_OR_RETURN(double stop, config.Double("grid.stop"));
    ASSIGN_OR_RETURN(int64_t per_decade, config.Int("grid.per_decade", 1));
    if (per_decade < 1) {
      return config.Error("grid.per_decade", "must be at least 1");
    }
    for (int64_t k = 0;; ++k) {
      const double x =
          start * std::pow(10.0, static_cast<double>(k) / per_decade);
      if (x > stop * (1 + 1e-12)) break;
      const int64_t n = std::llround(x);
      if (grid.empty() || grid.back() != n) grid.push_back(n);
    }
  }
  const std::string field = config.Has("grid.n") ? "grid.n" : "grid";
  if (grid.empty()) return config.Error(field, "empty grid");
  if (grid.front() < 1 || !std::is_sorted(grid.begin(), grid.end())) {
    return config.Error(field, "grid must be ascending and at least 1");
  }
  return grid;
}

template <typename T>
absl::Status FirstError(const std::vector<absl::StatusOr<T>>& results) {
  for (const auto& r : results) {
    if (!r.ok()) return r.status();
  }
  return absl::OkStatus();
}

std::string TableName(double eta) { return fmt::format("eta_{}", eta); }

}  // namespace

int ExitCode(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kNotFound:
      return 2;
    default:
      return 1;
  }
}

absl::StatusOr<Report> RunAccount(const Config& config,
                                  const CommandOptions&) {
  ASSIGN_OR_RETURN(BoundSetup s, ReadBoundSetup(config));
  ASSIGN_OR_RETURN(int64_t n, ReadN(config));
  ASSIGN_OR_RETURN(int64_t i, config.Int("i", 1));
  if (i < 1 || i > n) return config.Error("i", "must lie in [1, n]");

  Table t{"account",
          {"mode", "n", "i", "epsilon", "scale", "A", "B", "delta"},
          {}};
  Report report;

  ASSIGN_OR_RETURN(std::string mode, config.String("schedule.mode", "fixed"));
  if (!config.Has("scale") && mode == "online") {
    ASSIGN_OR_RETURN(ScheduleSpec sched,
                     ReadScheduleWithMode(config, ScheduleMode::kOnline));
    ASSIGN_OR_RETURN(double scale,
                     OnlineScale(i, sched, s.profile, s.geometry, s.kind));
    ASSIGN_OR_RETURN(BoundConstants ab,
                     AbConstants({s.kind, scale}, s.profile, s.geometry,
                                 s.epsilon));
    ASSIGN_OR_RETURN(double delta,
                     OnlineDeltaFinite(n, i, s.epsilon, sched, s.profile,
                                       s.geometry, s.kind));
    t.rows.push_back({std::string("online_per_index"), n, i, s.epsilon, scale,
                      ab.a, std::monostate{}, delta});
    report.notes.push_back(
        "online schedule: only the per-index bound is defined; scale and A "
        "refer to update i");
    report.tables.push_back(std::move(t));
    return report;
  }

  ASSIGN_OR_RETURN(double scale, ScaleAt(config, s, n));
  ASSIGN_OR_RETURN(BoundConstants ab, AbConstants({s.kind, scale}, s.profile,
                                                  s.geometry, s.epsilon));
  ASSIGN_OR_RETURN(double per_index, PerIndexDelta(ab, n, i));
  ASSIGN_OR_RETURN(double stopped, RandomlyStoppedDelta(ab, n, i));
  ASSIGN_OR_RETURN(double shuffled, ShuffledDelta(ab, n));
  t.rows.push_back({std::string("per_index"), n, i, s.epsilon, scale, ab.a,
                    ab.b, per_index});
  t.rows.push_back({std::string("randomly_stopped"), n, i, s.epsilon, scale,
                    ab.a, ab.b, stopped});
  t.rows.push_back({std::string("shuffled"), n, std::monostate{}, s.epsilon,
                    scale, ab.a, ab.b, shuffled});
  report.tables.push_back(std::move(t));
  return report;
}

absl::StatusOr<Report> RunCalibrate(const Config& config,
                                    const CommandOptions& options) {
  ASSIGN_OR_RETURN(ScheduleSpec sched, ReadSchedule(config));
  Report report;

  if (sched.mode == ScheduleMode::kFixed) {
    BoundSetup s;
    ASSIGN_OR_RETURN(s.kind, ReadNoiseKind(config));
    ASSIGN_OR_RETURN(std::vector<LossProfile> profiles, ReadProfiles(config));
    ASSIGN_OR_RETURN(s.geometry, ReadGeometry(config, s.kind));
    ASSIGN_OR_RETURN(s.epsilon, config.Double("epsilon"));
    ASSIGN_OR_RETURN(std::vector<int64_t> ns, config.IntList("n"));
    if (ns.empty()) return config.Error("n", "empty list");
    for (int64_t n : ns) {
      if (n < 1) return config.Error("n", "must be at least 1");
    }
    ASSIGN_OR_RETURN(double delta_star, DeltaStar(sched, s));
    const int64_t cells = profiles.size() * ns.size();
    std::vector<absl::StatusOr<FixedNoiseBound>> bounds(cells);
    ParallelFor(cells, options.workers, [&](int64_t k) {
      bounds[k] = ShuffledDeltaFixedNoise(ns[k % ns.size()], s.epsilon, sched,
                                          profiles[k / ns.size()], s.geometry,
                                          s.kind);
    });
    RETURN_IF_ERROR(FirstError(bounds));
    for (size_t p = 0; p < profiles.size(); ++p) {
      Table t{profiles.size() == 1 ? "fixed"
                                   : TableName(profiles[p].learning_rate),
              {"n", "scale", "A", "B", "delta", "delta_star"},
              {}};
      for (size_t k = 0; k < ns.size(); ++k) {
        const FixedNoiseBound& b = *bounds[p * ns.size() + k];
        t.rows.push_back({ns[k], b.scale, b.constants.a, b.constants.b,
                          b.delta, delta_star});
      }
      report.tables.push_back(std::move(t));
    }
    return report;
  }

  ASSIGN_OR_RETURN(BoundSetup s, ReadBoundSetup(config));
  ASSIGN_OR_RETURN(int64_t i, config.Int("i"));
  if (i < 1) return config.Error("i", "must be at least 1");
  ASSIGN_OR_RETURN(int64_t from, config.Int("indices.from", 1));
  ASSIGN_OR_RETURN(int64_t to, config.Int("indices.to", i));
  if (from < 1 || to < from) {
    return config.Error("indices", "need 1 <= from <= to");
  }
  Table schedule{"schedule", {"j", "scale"}, {}};
  for (int64_t j = from; j <= to; ++j) {
    ASSIGN_OR_RETURN(double scale,
                     OnlineScale(j, sched, s.profile, s.geometry, s.kind));
    schedule.rows.push_back({j, scale});
  }
  ASSIGN_OR_RETURN(OnlineLimitBracket br,
                   OnlineDeltaLimitBracket(i, s.epsilon, sched, s.profile,
                                           s.geometry, s.kind));
  Table bracket{"bracket",
                {"i", "A_i", "limit_lower", "limit_upper", "relative_gap",
                 "truncation_point"},
                {}};
  bracket.rows.push_back({i, br.a_i, br.lower, br.upper,
                          (br.upper - br.lower) / br.upper,
                          br.truncation_point});
  report.tables.push_back(std::move(schedule));
  report.tables.push_back(std::move(bracket));
  return report;
}

absl::StatusOr<Report> RunSweep(const Config& config,
                                const CommandOptions& options) {
  ASSIGN_OR_RETURN(std::string figure, config.String("figure"));
  BoundSetup s;
  ScheduleMode mode;
  if (figure == "laplace-fixed") {
    s.kind = NoiseKind::kLaplace;
    mode = ScheduleMode::kFixed;
  } else if (figure == "gaussian-fixed") {
    s.kind = NoiseKind::kGaussian;
    mode = ScheduleMode::kFixed;
  } else if (figure == "laplace-online") {
    s.kind = NoiseKind::kLaplace;
    mode = ScheduleMode::kOnline;
  } else if (figure == "gaussian-online") {
    s.kind = NoiseKind::kGaussian;
    mode = ScheduleMode::kOnline;
  } else {
    return config.Error("figure",
                        "expected laplace-fixed, gaussian-fixed, "
                        "laplace-online or gaussian-online");
  }
  if (config.Has("noise")) {
    ASSIGN_OR_RETURN(NoiseKind kind, ReadNoiseKind(config));
    if (kind != s.kind) return config.Error("noise", "conflicts with figure");
  }
  ASSIGN_OR_RETURN(std::vector<LossProfile> profiles, ReadProfiles(config));
  ASSIGN_OR_RETURN(s.geometry, ReadGeometry(config, s.kind));
  ASSIGN_OR_RETURN(s.epsilon, config.Double("epsilon"));
  ASSIGN_OR_RETURN(ScheduleSpec sched, ReadScheduleWithMode(config, mode));
  ASSIGN_OR_RETURN(std::vector<int64_t> grid, ReadGrid(config));
  const bool laplace = s.kind == NoiseKind::kLaplace;

  Report report;
  const auto name = [&](const LossProfile& p) {
    return profiles.size() == 1 ? figure : TableName(p.learning_rate);
  };

  if (mode == ScheduleMode::kFixed) {
    ASSIGN_OR_RETURN(double delta_star, DeltaStar(sched, s));
    const int64_t cells = profiles.size() * grid.size();
    std::vector<absl::StatusOr<FixedNoiseBound>> bounds(cells);
    ParallelFor(cells, options.workers, [&](int64_t k) {
      bounds[k] = ShuffledDeltaFixedNoise(
          grid[k % grid.size()], s.epsilon, sched,
          profiles[k / grid.size()], s.geometry, s.kind);
    });
    RETURN_IF_ERROR(FirstError(bounds));
    for (size_t p = 0; p < profiles.size(); ++p) {
      Table t{name(profiles[p]),
              {"n", "scale", "A", "B", "delta", "delta_star", "gap",
               laplace ? "n_times_gap" : "log_n_times_gap"},
              {}};
      for (size_t k = 0; k < grid.size(); ++k) {
        const FixedNoiseBound& b = *bounds[p * grid.size() + k];
        const double n = static_cast<double>(grid[k]);
        const double gap = b.delta - delta_star;
        t.rows.push_back({grid[k], b.scale, b.constants.a, b.constants.b,
                          b.delta, delta_star, gap,
                          (laplace ? n : std::log(n)) * gap});
      }
      report.tables.push_back(std::move(t));
    }
    return report;
  }

  ASSIGN_OR_RETURN(int64_t i, config.Int("i"));
  if (i < 1) return config.Error("i", "must be at least 1");
  if (grid.front() < i) return config.Error("grid", "every n must be >= i");
  struct OnlineSweep {
    std::vector<double> scales;
    std::vector<double> deltas;
    OnlineLimitBracket bracket;
  };
  std::vector<absl::StatusOr<OnlineSweep>> sweeps(profiles.size());
  ParallelFor(profiles.size(), options.workers, [&](int64_t p) {
    sweeps[p] = [&]() -> absl::StatusOr<OnlineSweep> {
      OnlineSweep out;
      for (int64_t n : grid) {
        ASSIGN_OR_RETURN(double scale, OnlineScale(n, sched, profiles[p],
                                                   s.geometry, s.kind));
        out.scales.push_back(scale);
      }
      ASSIGN_OR_RETURN(out.deltas,
                       OnlineDeltaFiniteSeries(grid, i, s.epsilon, sched,
                                               profiles[p], s.geometry,
                                               s.kind));
      ASSIGN_OR_RETURN(out.bracket,
                       OnlineDeltaLimitBracket(i, s.epsilon, sched,
                                               profiles[p], s.geometry,
                                               s.kind));
      return out;
    }();
  });
  RETURN_IF_ERROR(FirstError(sweeps));
  for (size_t p = 0; p < profiles.size(); ++p) {
    const OnlineSweep& sw = *sweeps[p];
    Table t{name(profiles[p]),
            {"n", "scale", "delta", "limit_lower", "limit_upper",
             "gap_to_upper", "log_n_times_gap"},
            {}};
    for (size_t k = 0; k < grid.size(); ++k) {
      const double gap = sw.deltas[k] - sw.bracket.upper;
      t.rows.push_back({grid[k], sw.scales[k], sw.deltas[k],
                        sw.bracket.lower, sw.bracket.upper, gap,
                        std::log(static_cast<double>(grid[k])) * gap});
    }
    report.tables.push_back(std::move(t));
  }
  report.notes.push_back(
      absl::StrCat("scale is the noise scale of update n; index i = ", i));
  return report;
}

absl::StatusOr<Report> RunCompose(const Config& config,
                                  const CommandOptions&) {
  PrivacyBudget per_epoch;
  Report report;
  if (config.Has("budget")) {
    ASSIGN_OR_RETURN(per_epoch.epsilon, config.Double("budget.epsilon"));
    ASSIGN_OR_RETURN(per_epoch.delta, config.Double("budget.delta"));
  } else {
    ASSIGN_OR_RETURN(BoundSetup s, ReadBoundSetup(config));
    ASSIGN_OR_RETURN(int64_t n, ReadN(config));
    ASSIGN_OR_RETURN(double scale, ScaleAt(config, s, n));
    ASSIGN_OR_RETURN(BoundConstants ab, AbConstants({s.kind, scale}, s.profile,
                                                    s.geometry, s.epsilon));
    per_epoch.epsilon = s.epsilon;
    ASSIGN_OR_RETURN(per_epoch.delta, ShuffledDelta(ab, n));
    report.notes.push_back("per-epoch budget: shuffled bound of one epoch");
  }
  if (absl::Status st = ValidateBudget(per_epoch); !st.ok()) {
    return config.Error("budget", st.message());
  }
  ASSIGN_OR_RETURN(int64_t epochs, config.Int("compose.epochs"));
  if (epochs < 1) return config.Error("compose.epochs", "must be at least 1");
  ASSIGN_OR_RETURN(std::string method, config.String("compose.method"));

  Table t{"compose",
          {"epochs", "currency", "alpha", "per_epoch_value", "composed_value",
           "epsilon", "delta", "negative_rdp_epsilon"},
          {}};
  std::optional<double> fixed_alpha;
  double delta_target = per_epoch.delta;
  double epsilon_target = per_epoch.epsilon;
  if (method == "rdp") {
    ASSIGN_OR_RETURN(delta_target,
                     config.Double("compose.delta_target", per_epoch.delta));
    ASSIGN_OR_RETURN(std::string alpha,
                     config.String("compose.alpha", "sweep"));
    if (alpha != "sweep") {
      ASSIGN_OR_RETURN(fixed_alpha, config.Double("compose.alpha"));
    }
  } else if (method == "gdp") {
    ASSIGN_OR_RETURN(epsilon_target, config.Double("compose.epsilon_target",
                                                   per_epoch.epsilon));
  } else {
    return config.Error("compose.method", "expected 'rdp' or 'gdp'");
  }

  for (int64_t e = 1; e <= epochs; ++e) {
    CompositionResult r;
    if (method == "gdp") {
      ASSIGN_OR_RETURN(r, ComposeEpochs(per_epoch, e,
                                        GdpMethod{epsilon_target}));
    } else if (fixed_alpha.has_value()) {
      ASSIGN_OR_RETURN(r, ComposeEpochs(per_epoch, e,
                                        RdpMethod{*fixed_alpha, delta_target}));
    } else {
      ASSIGN_OR_RETURN(r, RdpAlphaSweep(per_epoch, e, delta_target));
    }
    Cell alpha = std::monostate{};
    if (r.trace.currency == "rdp") alpha = r.trace.rdp_alpha;
    t.rows.push_back({e, r.trace.currency, alpha, r.trace.per_epoch_value,
                      r.trace.composed_value, r.budget.epsilon,
                      r.budget.delta,
                      static_cast<int64_t>(r.trace.negative_rdp_epsilon)});
  }
  report.notes.push_back(absl::StrCat(
      "per-epoch budget epsilon=", FormatDouble(per_epoch.epsilon),
      " delta=", FormatDouble(per_epoch.delta)));
  report.tables.push_back(std::move(t));
  return report;
}

namespace {

// d feature columns then one response column; an optional header row.
absl::StatusOr<Dataset> ReadDatasetCsv(const Config& config,
                                       const std::string& field,
                                       const std::string& path) {
  std::ifstream f(path);
  if (!f) return config.Error(field, absl::StrCat("cannot open ", path));
  Dataset data;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    absl::string_view view = absl::StripAsciiWhitespace(line);
    if (view.empty()) continue;
    std::vector<absl::string_view> parts = absl::StrSplit(view, ',');
    std::vector<double> values;
    for (absl::string_view part : parts) {
      double x = 0.0;
      if (!absl::SimpleAtod(absl::StripAsciiWhitespace(part), &x) ||
          !std::isfinite(x)) {
        values.clear();
        break;
      }
      values.push_back(x);
    }
    if (values.empty()) {
      if (data.n == 0 && line_no == 1) continue;  // header
      return config.Error(field,
                          absl::StrCat(path, ":", line_no, ": not numeric"));
    }
    if (values.size() < 2) {
      return config.Error(
          field, absl::StrCat(path, ":", line_no, ": need d >= 1 features"));
    }
    const int d = static_cast<int>(values.size()) - 1;
    if (data.n == 0) data.d = d;
    if (d != data.d) {
      return config.Error(field, absl::StrCat(path, ":", line_no,
                                              ": inconsistent column count"));
    }
    data.features.insert(data.features.end(), values.begin(),
                         values.end() - 1);
    data.responses.push_back(values.back());
    ++data.n;
  }
  if (data.n == 0) return config.Error(field, absl::StrCat(path, ": no rows"));
  return data;
}

double Mean(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / x.size();
}

double SampleStddev(const std::vector<double>& x) {
  const double m = Mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / (x.size() - 1));
}

}  // namespace

absl::StatusOr<Report> RunSimulate(const Config& config,
                                   const CommandOptions& options) {
  PnsgdConfig c;
  ASSIGN_OR_RETURN(NoiseKind kind, ReadNoiseKind(config));
  ASSIGN_OR_RETURN(double scale, config.Double("scale"));
  c.noise = {kind, scale};
  ASSIGN_OR_RETURN(c.profile.learning_rate, config.Double("profile.eta"));
  ASSIGN_OR_RETURN(std::string loss,
                   config.String("simulate.loss", "linear"));
  if (loss == "linear") {
    c.loss = LossKind::kLinear;
  } else if (loss == "logistic") {
    c.loss = LossKind::kLogistic;
  } else {
    return config.Error("simulate.loss", "expected 'linear' or 'logistic'");
  }
  ASSIGN_OR_RETURN(c.radius, config.Double("simulate.radius", 1.0));
  ASSIGN_OR_RETURN(int64_t replicas, config.Int("simulate.replicas", 1));
  if (replicas < 1 || replicas > (int64_t{1} << 31) - 1) {
    return config.Error("simulate.replicas", "must be a positive int");
  }
  c.replicas = static_cast<int>(replicas);
  c.seed = options.seed;

  Dataset data;
  std::string source;
  if (config.Has("simulate.dataset")) {
    ASSIGN_OR_RETURN(std::string rel, config.String("simulate.dataset"));
    const std::filesystem::path p =
        std::filesystem::path(config.path()).parent_path() / rel;
    ASSIGN_OR_RETURN(data, ReadDatasetCsv(config, "simulate.dataset",
                                          p.string()));
    if (config.Has("n")) {
      ASSIGN_OR_RETURN(int64_t n, ReadN(config));
      if (n != data.n) return config.Error("n", "does not match the dataset");
    }
    source = absl::StrCat("dataset ", rel);
  } else {
    ASSIGN_OR_RETURN(int64_t n, ReadN(config));
    ASSIGN_OR_RETURN(std::vector<double> theta,
                     config.DoubleList("simulate.theta_star"));
    if (theta.empty()) {
      return config.Error("simulate.theta_star", "empty list");
    }
    if (!(c.radius > 0)) {
      return config.Error("simulate.radius", "must be positive");
    }
    data = GenerateSynthetic(c.loss, n, ProjectOntoBall(theta, c.radius),
                             options.seed);
    source = "synthetic: standard normal covariates, theta* projected onto "
             "the ball, data drawn from the run seed";
  }
  c.n = data.n;
  c.d = data.d;
  if (absl::Status st = ValidateConfig(c); !st.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(config.path(), ": ", st.message()));
  }

  c.variant = Variant::kShuffled;
  ASSIGN_OR_RETURN(std::vector<TrajectoryResult> shuffled,
                   RunReplicas(c, data, options.workers));
  c.variant = Variant::kRandomlyStopped;
  ASSIGN_OR_RETURN(std::vector<TrajectoryResult> stopped,
                   RunReplicas(c, data, options.workers));

  Table t{"simulate",
          {"replica", "initial_loss", "shuffled_final_loss",
           "stopped_final_loss", "stopped_steps"},
          {}};
  std::vector<double> init, shuf, stop, steps;
  for (int r = 0; r < c.replicas; ++r) {
    init.push_back(shuffled[r].initial_loss);
    shuf.push_back(shuffled[r].per_epoch_loss.back());
    stop.push_back(stopped[r].per_epoch_loss.back());
    steps.push_back(static_cast<double>(stopped[r].steps_executed));
    t.rows.push_back({int64_t{r}, init.back(), shuf.back(), stop.back(),
                      stopped[r].steps_executed});
  }
  t.rows.push_back({std::string("mean"), Mean(init), Mean(shuf), Mean(stop),
                    Mean(steps)});
  if (c.replicas > 1) {
    t.rows.push_back({std::string("stddev"), SampleStddev(init),
                      SampleStddev(shuf), SampleStddev(stop),
                      SampleStddev(steps)});
  }
  Report report;
  report.tables.push_back(std::move(t));
  report.notes.push_back(source);
  report.notes.push_back(
      c.loss == LossKind::kLinear
          ? "loss: mean squared error over the dataset"
          : "loss: mean log loss over the dataset");
  report.notes.push_back(
      "final loss is evaluated after the last executed step of one epoch; "
      "replica r of both variants shares its noise stream");
  return report;
}

}  // namespace pnsgd::cli
