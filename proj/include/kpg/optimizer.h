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

#ifndef KPG_OPTIMIZER_H_
#define KPG_OPTIMIZER_H_

#include <string>
#include <vector>

#include "kpg/joint_params.h"

namespace kpg {

enum class OptimizerKind { kPlain, kMomentum, kRmsProp };

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_kind_from_string(const std::string& name);

// Defaults are conventional values; none are prescribed by the method.
struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kPlain;
  double momentum = 0.9;
  double decay = 0.99;
  double epsilon = 1e-8;
};

// Per-agent first-order ascent optimizer. step() turns a gradient into a
// parameter displacement and advances that agent's accumulator.
//
// Level updates rely on snapshot()/restore(): every level starts from the
// statistics saved at the beginning of the update, and only the final
// level's advance is kept.
class Optimizer {
 public:
  struct State {
    std::vector<Vector> accumulators;
    bool operator==(const State& other) const;
  };

  Optimizer(OptimizerConfig config, const Layout& layout);

  Vector step(int agent, const Vector& gradient, double eta);

  State snapshot() const { return state_; }
  void restore(const State& state);

  const OptimizerConfig& config() const { return config_; }

 private:
  OptimizerConfig config_;
  Layout layout_;
  State state_;
};

}  // namespace kpg

#endif  // KPG_OPTIMIZER_H_
