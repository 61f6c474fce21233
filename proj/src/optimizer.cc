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

#include "kpg/optimizer.h"

#include <cmath>
#include <cstring>

#include "kpg/errors.h"

namespace kpg {

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kPlain:
      return "plain";
    case OptimizerKind::kMomentum:
      return "momentum";
    case OptimizerKind::kRmsProp:
      return "rmsprop";
  }
  return "plain";
}

OptimizerKind optimizer_kind_from_string(const std::string& name) {
  if (name == "plain") return OptimizerKind::kPlain;
  if (name == "momentum") return OptimizerKind::kMomentum;
  if (name == "rmsprop") return OptimizerKind::kRmsProp;
  throw InputError("unknown optimizer kind '" + name +
                   "' (expected plain, momentum or rmsprop)");
}

bool Optimizer::State::operator==(const State& other) const {
  if (accumulators.size() != other.accumulators.size()) return false;
  for (std::size_t i = 0; i < accumulators.size(); ++i) {
    const Vector& a = accumulators[i];
    const Vector& b = other.accumulators[i];
    if (a.size() != b.size()) return false;
    // Bitwise, not approximate: restore must reproduce the snapshot exactly.
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      if (std::memcmp(&a[j], &b[j], sizeof(double)) != 0) return false;
    }
  }
  return true;
}

Optimizer::Optimizer(OptimizerConfig config, const Layout& layout)
    : config_(config), layout_(layout) {
  if (config_.kind == OptimizerKind::kMomentum &&
      !(config_.momentum >= 0.0 && config_.momentum < 1.0)) {
    throw InputError("momentum coefficient must lie in [0, 1)");
  }
  if (config_.kind == OptimizerKind::kRmsProp) {
    if (!(config_.decay >= 0.0 && config_.decay < 1.0)) {
      throw InputError("rmsprop decay must lie in [0, 1)");
    }
    if (!(config_.epsilon > 0.0)) {
      throw InputError("rmsprop epsilon must be positive");
    }
  }
  if (config_.kind != OptimizerKind::kPlain) {
    for (int i = 0; i < layout_.num_agents(); ++i) {
      state_.accumulators.push_back(Vector::Zero(layout_.dim(i)));
    }
  }
}

Vector Optimizer::step(int agent, const Vector& gradient, double eta) {
  switch (config_.kind) {
    case OptimizerKind::kPlain:
      return eta * gradient;
    case OptimizerKind::kMomentum: {
      Vector& velocity = state_.accumulators.at(agent);
      velocity = config_.momentum * velocity + gradient;
      return eta * velocity;
    }
    case OptimizerKind::kRmsProp: {
      Vector& square_avg = state_.accumulators.at(agent);
      square_avg = config_.decay * square_avg +
                   (1.0 - config_.decay) * gradient.cwiseAbs2();
      return eta * gradient.cwiseQuotient(
                       (square_avg.cwiseSqrt().array() + config_.epsilon)
                           .matrix());
    }
  }
  return eta * gradient;
}

void Optimizer::restore(const State& state) {
  if (state.accumulators.size() != state_.accumulators.size()) {
    throw InputError("optimizer snapshot does not match this optimizer");
  }
  state_ = state;
}

}  // namespace kpg
