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

#ifndef KPG_EXPERIMENT_H_
#define KPG_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kpg/config.h"
#include "kpg/game.h"
#include "kpg/tabular.h"
#include "kpg/theory.h"
#include "kpg/trace.h"

namespace kpg {

std::unique_ptr<DifferentiableGame> make_game(const GameSpec& spec);
TabularMarkovGame make_tabular_game(const GameSpec& spec);

// Fills theta0 (default or seeded random draw) and theta_star (the game's
// known equilibrium) so the echo file fully describes the run.
ExperimentConfig resolve(ExperimentConfig config);

struct RunResult {
  ExperimentConfig config;  // resolved
  ConvergenceTrace trace;
};

RunResult run_experiment(const ExperimentConfig& config);

struct RunFiles {
  std::string trace;
  std::string config;
  std::string params;
};

// Writes <stem>.trace.csv, <stem>.config.json and, when parameters were
// recorded, <stem>.params.csv.
RunFiles write_run(const RunResult& result, const std::string& stem);

// --out wins, then the config's "output", then the config file name.
std::string output_stem(const ExperimentConfig& config,
                        const std::optional<std::string>& out);

// Seeds first..last run concurrently; files are <stem>.seed<N>.* and
// <stem>.index.csv lists them in seed order. Returns the index path.
std::string run_seed_sweep(const ExperimentConfig& config, std::uint64_t first,
                           std::uint64_t last, const std::string& stem);

SuiteReport run_verify(int theorem, const ExperimentConfig& config);

// <stem>.verify<n>.csv (trace schema) and <stem>.verify<n>.json (metrics).
RunFiles write_verify(const SuiteReport& report, const std::string& stem);

std::string summary_line(const SuiteReport& report);

}  // namespace kpg

#endif  // KPG_EXPERIMENT_H_
