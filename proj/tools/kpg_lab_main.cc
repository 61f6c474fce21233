// Copyright 2026 The KPG Lab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// kpg-lab: run experiments, check the convergence bounds, plot traces.
//
//   kpg-lab run --config cfg.json [--out stem] [--seed N | --seeds A..B]
//   kpg-lab verify --theorem 1|2|3 --config cfg.json [--out stem] [--seed N]
//   kpg-lab plot trace.csv --kind trajectory|k-convergence|learning-curve
//                --out plot.svg [--update N]
//
// Exit codes: 0 success, 1 verification failed, 2 input error, 3 numeric
// error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kpg/config.h"
#include "kpg/errors.h"
#include "kpg/experiment.h"
#include "kpg/svg_plot.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("kpg-lab");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("KPG_LAB_LOG")) {
    const std::string name = env;
    if (name == "error" || name == "warn" || name == "info" || name == "debug") {
      spdlog::set_level(spdlog::level::from_str(name));
    } else {
      spdlog::warn("ignoring KPG_LAB_LOG={} (expected error, warn, info or debug)",
                   name);
    }
  }
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
  const std::size_t dots = s.find("..");
  if (dots == std::string::npos) {
    throw kpg::InputError("--seeds expects A..B, got '" + s + "'");
  }
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a = s.substr(0, dots);
    const std::string b = s.substr(dots + 2);
    const unsigned long long first = std::stoull(a, &used_a);
    const unsigned long long last = std::stoull(b, &used_b);
    if (used_a != a.size() || used_b != b.size() || a[0] == '-' || b[0] == '-') {
      throw std::invalid_argument(s);
    }
    return {first, last};
  } catch (const std::logic_error&) {
    throw kpg::InputError("--seeds expects non-negative integers A..B, got '" +
                          s + "'");
  }
}

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<long long> seed;
  std::optional<std::string> seeds;
  int theorem = 0;
  std::string trace;
  std::string kind;
  std::optional<int> update;
};

kpg::ExperimentConfig load(const Options& o) {
  kpg::ExperimentConfig config = kpg::load_config(o.config);
  if (o.seed) {
    if (*o.seed < 0) throw kpg::InputError("--seed must be non-negative");
    config.seed = static_cast<std::uint64_t>(*o.seed);
  }
  return config;
}

int cmd_run(const Options& o) {
  const kpg::ExperimentConfig config = load(o);
  const std::string stem = kpg::output_stem(config, o.out);
  if (o.seeds) {
    if (o.seed) throw kpg::InputError("--seed and --seeds are exclusive");
    const auto [first, last] = parse_seed_range(*o.seeds);
    spdlog::info("seed sweep {}..{} -> {}", first, last, stem);
    const std::string index = kpg::run_seed_sweep(config, first, last, stem);
    std::cout << index << "\n";
    return kExitOk;
  }
  spdlog::info("run {} K={} steps={}", kpg::to_string(config.algo), config.K,
               config.steps);
  const kpg::RunResult result = kpg::run_experiment(config);
  const kpg::RunFiles files = kpg::write_run(result, stem);
  spdlog::info("{} rows written", result.trace.rows.size());
  std::cout << files.trace << "\n";
  return kExitOk;
}

int cmd_verify(const Options& o) {
  const kpg::ExperimentConfig config = load(o);
  const kpg::SuiteReport report = kpg::run_verify(o.theorem, config);
  const std::string stem = kpg::output_stem(config, o.out);
  const kpg::RunFiles files = kpg::write_verify(report, stem);
  if (!report.note.empty()) spdlog::warn("{}", report.note);
  for (const auto& [key, value] : report.metrics) {
    spdlog::info("{} = {}", key, value);
  }
  spdlog::info("detail: {} metrics: {}", files.trace, files.params);
  std::cout << kpg::summary_line(report) << "\n";
  return report.status == kpg::SuiteStatus::kFail ? kExitVerifyFailed : kExitOk;
}

int cmd_plot(const Options& o) {
  if (!o.out) throw kpg::InputError("plot needs --out <file.svg>");
  kpg::plot_trace_file(o.trace, kpg::plot_kind_from_string(o.kind), *o.out,
                       o.update);
  std::cout << *o.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"k-level policy gradient lab"};
  app.require_subcommand(1);
  Options o;

  CLI::App* run = app.add_subcommand("run", "run an experiment from a config");
  run->add_option("--config", o.config, "config file (JSON)")->required();
  run->add_option("--out", o.out, "output stem");
  run->add_option("--seed", o.seed, "override the config seed");
  run->add_option("--seeds", o.seeds, "seed sweep A..B");

  CLI::App* verify = app.add_subcommand("verify", "check a convergence theorem");
  verify->add_option("--theorem", o.theorem, "1, 2 or 3")
      ->required()
      ->check(CLI::Range(1, 3));
  verify->add_option("--config", o.config, "config file (JSON)")->required();
  verify->add_option("--out", o.out, "output stem");
  verify->add_option("--seed", o.seed, "override the config seed");

  CLI::App* plot = app.add_subcommand("plot", "render a trace as SVG");
  plot->add_option("trace", o.trace, "trace CSV")->required();
  plot->add_option("--kind", o.kind, "trajectory, k-convergence or learning-curve")
      ->required();
  plot->add_option("--out", o.out, "SVG file")->required();
  plot->add_option("--update", o.update, "update index for k-convergence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    if (verify->parsed()) return cmd_verify(o);
    return cmd_plot(o);
  } catch (const kpg::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const kpg::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
