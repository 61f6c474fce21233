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

#ifndef KPG_CONFIG_H_
#define KPG_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kpg/errors.h"
#include "kpg/joint_params.h"
#include "kpg/optimizer.h"
#include "kpg/tabular.h"

namespace kpg {

// Parse or validation failure in a config file. The message starts with
// "<source>:<line>:".
class ConfigError : public InputError {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

enum class GameKind { kMeetup, kQuadratic, kMatrix };
enum class Algo { kKpg, kGsppm, kTabularKmappo };

std::string to_string(GameKind kind);
std::string to_string(Algo algo);

struct GameSpec {
  GameKind kind = GameKind::kMeetup;
  // meetup
  std::vector<double> start1 = {0.0, 0.0};
  std::vector<double> start2 = {3.0, 2.0};
  // quadratic
  std::vector<Matrix> own;
  std::vector<Matrix> coupling;
  // matrix
  std::vector<int> actions;
  std::vector<double> payoff;
  bool shared = true;
};

struct VerifySpec {
  int starts = 100;
  double radius = 1e-2;
  int max_level = 10;
};

struct ExperimentConfig {
  std::string source;  // file the config came from
  GameSpec game;
  Algo algo = Algo::kKpg;
  int K = 1;
  std::vector<double> eta;  // one per agent after resolution
  OptimizerConfig optimizer;
  int steps = 100;
  bool random_theta0 = false;
  std::optional<Vector> theta0;
  std::optional<Vector> theta_star;
  double gsppm_tol = 1e-12;
  int constant_samples = 10000;
  double eps_clip = 0.2;
  SurrogateMode surrogate = SurrogateMode::kStandard;
  double init_scale = 0.0;
  std::uint64_t seed = 0;
  std::string output;
  VerifySpec verify;

  int num_agents() const;
};

ExperimentConfig parse_config(const std::string& text,
                              const std::string& source);
ExperimentConfig load_config(const std::string& path);

// Fully resolved config with every default written out, as pretty JSON.
std::string config_echo(const ExperimentConfig& config);

}  // namespace kpg

#endif  // KPG_CONFIG_H_
