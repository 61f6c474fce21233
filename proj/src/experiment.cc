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

#include "kpg/experiment.h"

#include <filesystem>
#include <future>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "kpg/engine.h"
#include "kpg/meetup.h"
#include "kpg/quadratic.h"
#include "kpg/trace_csv.h"

namespace kpg {
namespace {

Vector default_theta0(const GameSpec& spec, int dim) {
  if (spec.kind == GameKind::kMeetup) {
    Vector t(2);
    t << 0.0, std::numbers::pi;
    return t;
  }
  return Vector::Ones(dim);
}

std::string suffixed(const std::string& stem, const std::string& suffix) {
  return stem + suffix;
}

void ensure_parent(const std::string& path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

}  // namespace

std::unique_ptr<DifferentiableGame> make_game(const GameSpec& spec) {
  switch (spec.kind) {
    case GameKind::kMeetup:
      return std::make_unique<MeetupGame>(
          Eigen::Vector2d(spec.start1[0], spec.start1[1]),
          Eigen::Vector2d(spec.start2[0], spec.start2[1]));
    case GameKind::kQuadratic:
      return std::make_unique<QuadraticGame>(spec.own, spec.coupling);
    case GameKind::kMatrix:
      break;
  }
  throw InputError("matrix games are tabular, not differentiable");
}

TabularMarkovGame make_tabular_game(const GameSpec& spec) {
  if (spec.kind != GameKind::kMatrix) {
    throw InputError("game kind '" + to_string(spec.kind) + "' is not tabular");
  }
  return matrix_game_make(spec.actions, spec.payoff, spec.shared);
}

ExperimentConfig resolve(ExperimentConfig config) {
  if (config.game.kind == GameKind::kMatrix) return config;
  const std::unique_ptr<DifferentiableGame> game = make_game(config.game);
  if (!config.theta0) {
    if (config.random_theta0) {
      config.theta0 = region_starts(*game, 1, config.seed).front();
    } else {
      config.theta0 = default_theta0(config.game, game->total_dim());
    }
  }
  if (!config.theta_star) config.theta_star = game->known_equilibrium();
  return config;
}

RunResult run_experiment(const ExperimentConfig& raw) {
  RunResult result{resolve(raw), {}};
  const ExperimentConfig& c = result.config;
  const LearningRates rates(c.eta);

  if (c.algo == Algo::kTabularKmappo) {
    const TabularMarkovGame game = make_tabular_game(c.game);
    TabularTrainOptions options;
    options.eps_clip = c.eps_clip;
    options.mode = c.surrogate;
    options.init_scale = c.init_scale;
    options.seed = c.seed;
    result.trace = kpg_tabular_train(game, c.K, rates, c.steps, options).trace;
    return result;
  }

  const std::unique_ptr<DifferentiableGame> game = make_game(c.game);
  const GameConstants constants =
      estimate_constants(*game, std::nullopt, c.constant_samples, c.seed);
  const int n = game->num_agents();
  const double eta_max = rates.max();

  TrainOptions options;
  options.reference = c.theta_star;
  options.step_bound = [=](int k) {
    return theorem1_bound(k, eta_max, constants.L, n, constants.grad_max);
  };
  options.record_params = true;
  options.record_returns = true;
  const JointParams theta0(game->layout(), *c.theta0);

  if (c.algo == Algo::kGsppm) {
    result.trace = train_gsppm(*game, theta0, rates, c.steps, c.gsppm_tol, c.K,
                               options)
                       .trace;
  } else {
    Optimizer optimizer(c.optimizer, game->layout());
    result.trace =
        train(*game, theta0, rates, c.K, c.steps, optimizer, options).trace;
  }
  return result;
}

RunFiles write_run(const RunResult& result, const std::string& stem) {
  RunFiles files{suffixed(stem, ".trace.csv"), suffixed(stem, ".config.json"),
                 ""};
  ensure_parent(files.trace);
  std::ostringstream trace;
  write_trace_csv(trace, result.trace.rows);
  write_file(files.trace, trace.str());
  write_file(files.config, config_echo(result.config));
  if (!result.trace.params.empty()) {
    files.params = suffixed(stem, ".params.csv");
    std::ostringstream params;
    write_params_csv(params, result.trace.params);
    write_file(files.params, params.str());
  }
  return files;
}

std::string output_stem(const ExperimentConfig& config,
                        const std::optional<std::string>& out) {
  std::string stem;
  if (out && !out->empty()) {
    stem = *out;
  } else if (!config.output.empty()) {
    stem = config.output;
  } else {
    stem = std::filesystem::path(config.source).stem().string();
    if (stem.empty()) stem = "run";
  }
  for (const char* ext : {".trace.csv", ".csv"}) {
    const std::string e = ext;
    if (stem.size() > e.size() &&
        stem.compare(stem.size() - e.size(), e.size(), e) == 0) {
      stem.resize(stem.size() - e.size());
      break;
    }
  }
  return stem;
}

std::string run_seed_sweep(const ExperimentConfig& config, std::uint64_t first,
                           std::uint64_t last, const std::string& stem) {
  if (last < first) throw InputError("seed range must satisfy a <= b");
  if (last - first >= 4096) throw InputError("seed range is too large");
  std::vector<std::future<RunFiles>> jobs;
  for (std::uint64_t seed = first; seed <= last; ++seed) {
    ExperimentConfig c = config;
    c.seed = seed;
    const std::string seed_stem = stem + ".seed" + std::to_string(seed);
    jobs.push_back(std::async(std::launch::async, [c, seed_stem] {
      return write_run(run_experiment(c), seed_stem);
    }));
  }
  std::ostringstream index;
  index << "seed,trace,config\n";
  std::uint64_t seed = first;
  for (auto& job : jobs) {
    const RunFiles files = job.get();
    index << seed++ << ',' << files.trace << ',' << files.config << '\n';
  }
  const std::string path = suffixed(stem, ".index.csv");
  write_file(path, index.str());
  return path;
}

SuiteReport run_verify(int theorem, const ExperimentConfig& raw) {
  if (theorem < 1 || theorem > 3) throw InputError("theorem must be 1, 2 or 3");
  if (raw.game.kind == GameKind::kMatrix) {
    throw InputError("verify needs a differentiable game (meetup or quadratic)");
  }
  const ExperimentConfig c = resolve(raw);
  const std::unique_ptr<DifferentiableGame> game = make_game(c.game);
  const LearningRates rates(c.eta);
  if (theorem == 1) {
    Theorem1Options o;
    o.starts = c.verify.starts;
    o.max_level = c.verify.max_level;
    o.samples = c.constant_samples;
    o.seed = c.seed;
    return verify_theorem1(*game, rates, o);
  }
  if (!c.theta_star) {
    throw InputError("theorem " + std::to_string(theorem) +
                     " needs theta_star in the config");
  }
  if (theorem == 2) {
    Theorem2Options o;
    o.starts = c.verify.starts;
    o.radius = c.verify.radius;
    o.seed = c.seed;
    return verify_theorem2(*game, *c.theta_star, rates, o);
  }
  Theorem3Options o;
  o.starts = c.verify.starts;
  o.radius = c.verify.radius;
  o.max_level = c.verify.max_level;
  o.samples = c.constant_samples;
  o.seed = c.seed;
  return verify_theorem3(*game, *c.theta_star, rates, o);
}

RunFiles write_verify(const SuiteReport& report, const std::string& stem) {
  const std::string base = stem + ".verify" + std::to_string(report.theorem);
  RunFiles files{base + ".csv", "", base + ".json"};
  ensure_parent(files.trace);
  std::ostringstream csv;
  write_trace_csv(csv, report.detail.rows);
  write_file(files.trace, csv.str());

  nlohmann::ordered_json j;
  j["theorem"] = report.theorem;
  j["status"] = to_string(report.status);
  j["checked"] = report.checked;
  j["violations"] = report.violations;
  j["note"] = report.note;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.metrics) metrics[key] = value;
  j["metrics"] = metrics;
  write_file(files.params, j.dump(2) + "\n");
  return files;
}

std::string summary_line(const SuiteReport& report) {
  return "THEOREM " + std::to_string(report.theorem) + " " +
         to_string(report.status) + " checked=" +
         std::to_string(report.checked) +
         " violations=" + std::to_string(report.violations);
}

}  // namespace kpg
