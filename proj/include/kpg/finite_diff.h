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

#ifndef KPG_FINITE_DIFF_H_
#define KPG_FINITE_DIFF_H_

#include <optional>

#include "kpg/game.h"

namespace kpg {

// Central-difference oracles. When `step` is empty each coordinate j gets
// its own scaled step: cbrt(eps) * max(1, |theta_j|) for gradients and
// eps^(1/4) * max(1, |theta_j|) for second derivatives.

// (J_i(theta + h e_j) - J_i(theta - h e_j)) / 2h over agent i's coordinates.
Vector fd_gradient(const DifferentiableGame& game, int agent,
                   const Vector& theta, std::optional<double> step = {});

// A_i and B_i by central differences of game.gradient(i, .), so the result
// is nested finite differences when the game has no analytic gradient.
// C_i by second differences of J_i.
AgentHessian fd_hessian_blocks(const DifferentiableGame& game, int agent,
                               const Vector& theta,
                               std::optional<double> step = {});

double default_gradient_step(double x);
double default_hessian_step(double x);

namespace internal {
// fd_gradient without the region check; used as the default gradient of
// games that only define an objective.
Vector central_gradient(const DifferentiableGame& game, int agent,
                        const Vector& theta, std::optional<double> step);
}  // namespace internal

}  // namespace kpg

#endif  // KPG_FINITE_DIFF_H_
