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

#ifndef KPG_ENGINE_H_
#define KPG_ENGINE_H_

#include <functional>
#include <optional>
#include <vector>

#include "kpg/game.h"
#include "kpg/optimizer.h"
#include "kpg/trace.h"

namespace kpg {

// Per-agent step sizes eta_i > 0.
class LearningRates {
 public:
  explicit LearningRates(std::vector<double> eta);
  static LearningRates uniform(int num_agents, double eta);

  double operator[](int agent) const { return eta_.at(agent); }
  int size() const { return static_cast<int>(eta_.size()); }
  double max() const;
  const std::vector<double>& values() const { return eta_; }

 private:
  std::vector<double> eta_;
};

// Optional per-row instrumentation for the level loop.
struct TraceOptions {
  int update = 0;
  // theta* for dist_star; distances use game.difference().
  std::optional<Vector> reference;
  // Bound on step_dist at level k, written to bound_t1.
  std::function<double(int)> step_bound;
  bool record_params = false;
  // Append one return row per agent after the final level.
  bool record_returns = false;
};

struct UpdateResult {
  JointParams theta;
  ConvergenceTrace trace;
};

// One K-level update. For k = 1..K, synchronously for every agent:
//
//   theta_i^(k) = theta_i + step_i(grad_i J_i(theta_i, theta_{-i}^(k-1)))
//
// with theta^(0) = theta. Every level is one optimizer step away from the
// same initial theta. The optimizer is restored to its start-of-update
// snapshot before every level, so only the final level advances it.
UpdateResult kpg_update(const DifferentiableGame& game,
                        const JointParams& theta, const LearningRates& rates,
                        int levels, Optimizer& optimizer,
                        const TraceOptions& options = {});

struct GsppmResult {
  JointParams theta;
  bool converged = false;
  int levels_used = 0;
  ConvergenceTrace trace;
};

// Iterates plain-gradient levels until ||theta^(k) - theta^(k-1)||_inf < tol
// or k = max_levels. Non-convergence is reported, not thrown.
GsppmResult gsppm_solve(const DifferentiableGame& game,
                        const JointParams& theta, const LearningRates& rates,
                        double tol, int max_levels,
                        const TraceOptions& options = {});

// max_i ||theta_inf_i - theta_i - eta_i grad_i J_i(theta_i, theta_inf_{-i})||_inf
double gsppm_residual(const DifferentiableGame& game, const Vector& theta,
                      const Vector& theta_inf, const LearningRates& rates);

struct TrainOptions {
  std::optional<Vector> reference;
  std::function<double(int)> step_bound;
  bool record_params = false;
  bool record_returns = true;
};

struct TrainResult {
  JointParams theta;
  ConvergenceTrace trace;
};

// Repeated kpg_update, committing theta <- theta^(K) after every update.
TrainResult train(const DifferentiableGame& game, const JointParams& theta0,
                  const LearningRates& rates, int levels, int steps,
                  Optimizer& optimizer, const TrainOptions& options = {});

// Repeated GSPPM updates.
TrainResult train_gsppm(const DifferentiableGame& game,
                        const JointParams& theta0, const LearningRates& rates,
                        int steps, double tol, int max_levels,
                        const TrainOptions& options = {});

// First update index at which game.distance(theta, reference) < radius,
// counting the starting point as update 0.
std::optional<int> first_passage(const DifferentiableGame& game,
                                 const JointParams& theta0,
                                 const LearningRates& rates, int levels,
                                 int max_updates, OptimizerConfig optimizer,
                                 const Vector& reference, double radius);

}  // namespace kpg

#endif  // KPG_ENGINE_H_
