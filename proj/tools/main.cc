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

// pnsgd: privacy accounting and simulation for shuffled and online-decay
// projected noisy SGD.

#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.h"
#include "config.h"
#include "output.h"

namespace {

using pnsgd::cli::CommandOptions;
using pnsgd::cli::Config;
using pnsgd::cli::Format;
using pnsgd::cli::Report;

using CommandFn = std::function<absl::StatusOr<Report>(
    const Config&, const CommandOptions&)>;

int Execute(const CommandFn& command, const std::vector<std::string>& argv,
            const std::string& config_path, std::optional<uint64_t> seed_flag,
            const std::string& out, Format format, int workers) {
  absl::StatusOr<Config> config = Config::Load(config_path);
  if (!config.ok()) {
    std::cerr << "error: " << config.status().message() << "\n";
    return 2;
  }
  CommandOptions options;
  options.workers = workers;
  if (seed_flag.has_value()) {
    options.seed = *seed_flag;
  } else {
    absl::StatusOr<int64_t> seed = config->Int("seed", 0);
    if (!seed.ok() || *seed < 0) {
      std::cerr << "error: "
                << (seed.ok() ? "seed must be nonnegative"
                              : seed.status().message())
                << "\n";
      return 2;
    }
    options.seed = static_cast<uint64_t>(*seed);
  }

  absl::StatusOr<Report> report = command(*config, options);
  if (!report.ok()) {
    std::cerr << "error: " << report.status().message() << "\n";
    return pnsgd::cli::ExitCode(report.status());
  }

  if (out.empty()) {
    if (format == Format::kJson) {
      std::cout << pnsgd::cli::RenderJson(report->tables);
    } else {
      for (size_t k = 0; k < report->tables.size(); ++k) {
        if (report->tables.size() > 1) {
          std::cout << (k ? "\n" : "") << "# " << report->tables[k].name
                    << "\n";
        }
        std::cout << pnsgd::cli::RenderCsv(report->tables[k]);
      }
    }
    return 0;
  }

  pnsgd::cli::ManifestInfo info;
  info.command_line = argv;
  info.config_path = config_path;
  info.config_sha256 = pnsgd::cli::Sha256Hex(config->text());
  info.seed = options.seed;
  info.notes = report->notes;
  const std::vector<std::string> paths =
      pnsgd::cli::OutputPaths(out, report->tables);
  for (size_t k = 0; k < paths.size(); ++k) {
    const std::string payload =
        format == Format::kJson
            ? pnsgd::cli::RenderJson({report->tables[k]})
            : pnsgd::cli::RenderCsv(report->tables[k]);
    if (absl::Status st = WriteWithManifest(paths[k], payload, info);
        !st.ok()) {
      std::cerr << "error: " << st.message() << "\n";
      return 1;
    }
    std::cout << paths[k] << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Privacy accounting for shuffled and online-decay PNSGD"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out;
  Format format = Format::kCsv;
  int workers = 1;

  const std::map<std::string, Format> formats = {{"csv", Format::kCsv},
                                                 {"json", Format::kJson}};
  const std::vector<std::pair<std::string, std::pair<std::string, CommandFn>>>
      commands = {
          {"account",
           {"Per-index, randomly-stopped and shuffled delta",
            pnsgd::cli::RunAccount}},
          {"calibrate",
           {"Noise schedules, limits and online brackets",
            pnsgd::cli::RunCalibrate}},
          {"sweep",
           {"Convergence of delta over an n-grid", pnsgd::cli::RunSweep}},
          {"compose",
           {"Multi-epoch composition", pnsgd::cli::RunCompose}},
          {"simulate",
           {"Paired shuffled / randomly-stopped runs",
            pnsgd::cli::RunSimulate}},
      };

  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "YAML config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Seed (overrides the config's seed)");
    sub->add_option("--out", out, "Output path; stdout when omitted");
    sub->add_option("--format", format, "csv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--workers", workers, "Worker threads")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& [name, entry] : commands) {
    if (app.got_subcommand(name)) {
      return Execute(entry.second, args, config_path, seed, out, format,
                     workers);
    }
  }
  return 2;
}
