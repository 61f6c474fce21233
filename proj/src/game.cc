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

#include "kpg/game.h"

#include <string>

#include "kpg/errors.h"
#include "kpg/finite_diff.h"

namespace kpg {

Box Box::uniform(int dim, double lo, double hi) {
  if (!(lo < hi)) throw InputError("region bounds must satisfy lower < upper");
  return Box{Vector::Constant(dim, lo), Vector::Constant(dim, hi)};
}

bool Box::contains(const Vector& theta) const {
  if (theta.size() != lower.size()) return false;
  return (theta.array() >= lower.array()).all() &&
         (theta.array() <= upper.array()).all();
}

DifferentiableGame::DifferentiableGame(Layout layout, std::optional<Box> region)
    : layout_(std::move(layout)) {
  if (region) {
    if (region->dim() != layout_.total_dim() ||
        region->upper.size() != layout_.total_dim()) {
      throw InputError("region dimension does not match the joint dimension");
    }
    if (!(region->lower.array() < region->upper.array()).all()) {
      throw InputError("region bounds must satisfy lower < upper");
    }
    region_ = std::move(*region);
  } else {
    region_ = Box::uniform(layout_.total_dim(), -kDefaultRegionHalfWidth,
                           kDefaultRegionHalfWidth);
  }
}

Vector DifferentiableGame::gradient(int agent, const Vector& theta) const {
  return internal::central_gradient(*this, agent, theta, std::nullopt);
}

void DifferentiableGame::check_agent(int agent) const {
  if (agent < 0 || agent >= num_agents()) {
    throw InputError("agent index " + std::to_string(agent) +
                     " out of range for a " + std::to_string(num_agents()) +
                     "-agent game");
  }
}

void DifferentiableGame::check_theta(const Vector& theta) const {
  if (theta.size() != total_dim()) {
    throw InputError("joint vector has length " + std::to_string(theta.size()) +
                     ", game expects " + std::to_string(total_dim()));
  }
}

FunctionGame::FunctionGame(Layout layout, Objective objective,
                           Gradient gradient, std::optional<Box> region,
                           std::string name)
    : DifferentiableGame(std::move(layout), std::move(region)),
      objective_(std::move(objective)),
      gradient_(std::move(gradient)),
      name_(std::move(name)) {
  if (!objective_) throw InputError("FunctionGame needs an objective");
}

double FunctionGame::objective(int agent, const Vector& theta) const {
  check_agent(agent);
  check_theta(theta);
  return objective_(agent, theta);
}

Vector FunctionGame::gradient(int agent, const Vector& theta) const {
  check_agent(agent);
  check_theta(theta);
  if (!gradient_) return DifferentiableGame::gradient(agent, theta);
  Vector g = gradient_(agent, theta);
  if (g.size() != layout().dim(agent)) {
    throw InputError("gradient callback returned length " +
                     std::to_string(g.size()) + " for agent " +
                     std::to_string(agent) + ", expected " +
                     std::to_string(layout().dim(agent)));
  }
  return g;
}

}  // namespace kpg
