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

#include "kpg/engine.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "kpg/errors.h"

namespace kpg {

void ConvergenceTrace::append(const ConvergenceTrace& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  params.insert(params.end(), other.params.begin(), other.params.end());
}

LearningRates::LearningRates(std::vector<double> eta) : eta_(std::move(eta)) {
  if (eta_.empty()) throw InputError("learning rates must not be empty");
  for (std::size_t i = 0; i < eta_.size(); ++i) {
    if (!std::isfinite(eta_[i]) || eta_[i] <= 0.0) {
      throw InputError("learning rate for agent " + std::to_string(i) +
                       " must be positive and finite");
    }
  }
}

LearningRates LearningRates::uniform(int num_agents, double eta) {
  if (num_agents < 1) throw InputError("need at least one agent");
  return LearningRates(std::vector<double>(num_agents, eta));
}

double LearningRates::max() const {
  return *std::max_element(eta_.begin(), eta_.end());
}

namespace {

void check_inputs(const DifferentiableGame& game, const JointParams& theta,
                  const LearningRates& rates) {
  if (!(theta.layout() == game.layout())) {
    throw InputError("parameter layout does not match the game");
  }
  if (rates.size() != game.num_agents()) {
    throw InputError("expected " + std::to_string(game.num_agents()) +
                     " learning rates, got " + std::to_string(rates.size()));
  }
  if (!theta.flat().allFinite()) {
    throw InputError("parameters must be finite");
  }
  if (!game.region().contains(theta.flat())) {
    throw InputError("parameters lie outside the game region");
  }
}

void check_reference(const DifferentiableGame& game,
                     const std::optional<Vector>& reference) {
  if (reference && reference->size() != game.total_dim()) {
    throw InputError("reference point has length " +
                     std::to_string(reference->size()) + ", game expects " +
                     std::to_string(game.total_dim()));
  }
}

Vector level_gradient(const DifferentiableGame& game, int agent,
                      const Vector& anchor, const Vector& previous, int level) {
  const Vector point = splice(game.layout(), agent, anchor, previous);
  Vector g = game.gradient(agent, point);
  if (!g.allFinite()) {
    NumericContext ctx;
    ctx.level = level;
    ctx.agent = agent;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      if (!std::isfinite(g[j])) {
        ctx.coordinate = static_cast<int>(j);
        break;
      }
    }
    throw NumericError("non-finite gradient", ctx);
  }
  return g;
}

TraceRow level_row(const DifferentiableGame& game, const TraceOptions& options,
                   int level, const Vector& current, const Vector* previous) {
  TraceRow row;
  row.update = options.update;
  row.level = level;
  if (previous) row.step_dist = game.distance(current, *previous);
  if (options.reference) {
    row.dist_star = game.distance(current, *options.reference);
  }
  if (level >= 1 && options.step_bound) row.bound_t1 = options.step_bound(level);
  return row;
}

void record_returns(const DifferentiableGame& game, const TraceOptions& options,
                    int level, const Vector& theta, ConvergenceTrace& trace) {
  for (int i = 0; i < game.num_agents(); ++i) {
    TraceRow row;
    row.update = options.update;
    row.level = level;
    row.agent = i;
    row.ret = game.objective(i, theta);
    trace.rows.push_back(row);
  }
}

}  // namespace

UpdateResult kpg_update(const DifferentiableGame& game,
                        const JointParams& theta, const LearningRates& rates,
                        int levels, Optimizer& optimizer,
                        const TraceOptions& options) {
  if (levels < 1) throw InputError("K must be at least 1");
  check_inputs(game, theta, rates);
  check_reference(game, options.reference);

  const Layout& layout = game.layout();
  const Vector& anchor = theta.flat();
  const Optimizer::State start = optimizer.snapshot();

  ConvergenceTrace trace;
  trace.rows.push_back(level_row(game, options, 0, anchor, nullptr));
  if (options.record_params) trace.params.push_back({options.update, 0, anchor});

  Vector previous = anchor;
  for (int k = 1; k <= levels; ++k) {
    optimizer.restore(start);
    Vector next = anchor;
    for (int i = 0; i < layout.num_agents(); ++i) {
      const Vector g = level_gradient(game, i, anchor, previous, k);
      next.segment(layout.offset(i), layout.dim(i)) += optimizer.step(i, g, rates[i]);
    }
    trace.rows.push_back(level_row(game, options, k, next, &previous));
    if (options.record_params) trace.params.push_back({options.update, k, next});
    previous = std::move(next);
  }
  if (options.record_returns) {
    record_returns(game, options, levels, previous, trace);
  }
  return {JointParams(layout, std::move(previous)), std::move(trace)};
}

GsppmResult gsppm_solve(const DifferentiableGame& game,
                        const JointParams& theta, const LearningRates& rates,
                        double tol, int max_levels,
                        const TraceOptions& options) {
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  if (max_levels < 1) throw InputError("k_max must be at least 1");
  check_inputs(game, theta, rates);
  check_reference(game, options.reference);

  const Layout& layout = game.layout();
  const Vector& anchor = theta.flat();

  GsppmResult result{theta, false, 0, {}};
  ConvergenceTrace& trace = result.trace;
  trace.rows.push_back(level_row(game, options, 0, anchor, nullptr));
  if (options.record_params) trace.params.push_back({options.update, 0, anchor});

  Vector previous = anchor;
  for (int k = 1; k <= max_levels; ++k) {
    Vector next = anchor;
    for (int i = 0; i < layout.num_agents(); ++i) {
      const Vector g = level_gradient(game, i, anchor, previous, k);
      next.segment(layout.offset(i), layout.dim(i)) += rates[i] * g;
    }
    trace.rows.push_back(level_row(game, options, k, next, &previous));
    if (options.record_params) trace.params.push_back({options.update, k, next});
    const double change = game.difference(next, previous).lpNorm<Eigen::Infinity>();
    previous = std::move(next);
    result.levels_used = k;
    if (!std::isfinite(change)) break;
    if (change < tol) {
      result.converged = true;
      break;
    }
  }
  if (options.record_returns && previous.allFinite()) {
    record_returns(game, options, result.levels_used, previous, trace);
  }
  result.theta = JointParams(layout, std::move(previous));
  return result;
}

double gsppm_residual(const DifferentiableGame& game, const Vector& theta,
                      const Vector& theta_inf, const LearningRates& rates) {
  const Layout& layout = game.layout();
  if (theta.size() != layout.total_dim() ||
      theta_inf.size() != layout.total_dim()) {
    throw InputError("residual inputs do not match the game dimension");
  }
  Vector implied = theta_inf;
  for (int i = 0; i < layout.num_agents(); ++i) {
    const Vector point = splice(layout, i, theta, theta_inf);
    implied.segment(layout.offset(i), layout.dim(i)) =
        theta.segment(layout.offset(i), layout.dim(i)) +
        rates[i] * game.gradient(i, point);
  }
  const double worst =
      game.difference(theta_inf, implied).lpNorm<Eigen::Infinity>();
  return worst;
}

namespace {

TraceOptions update_options(const TrainOptions& options, int update) {
  TraceOptions out;
  out.update = update;
  out.reference = options.reference;
  out.step_bound = options.step_bound;
  out.record_params = options.record_params;
  out.record_returns = options.record_returns;
  return out;
}

}  // namespace

TrainResult train(const DifferentiableGame& game, const JointParams& theta0,
                  const LearningRates& rates, int levels, int steps,
                  Optimizer& optimizer, const TrainOptions& options) {
  if (steps < 1) throw InputError("steps must be at least 1");
  if (levels < 1) throw InputError("K must be at least 1");
  TrainResult result{theta0, {}};
  for (int t = 0; t < steps; ++t) {
    try {
      UpdateResult step = kpg_update(game, result.theta, rates, levels,
                                     optimizer, update_options(options, t));
      result.theta = std::move(step.theta);
      result.trace.append(step.trace);
    } catch (const NumericError& e) {
      throw e.with_update(t);
    }
  }
  return result;
}

TrainResult train_gsppm(const DifferentiableGame& game,
                        const JointParams& theta0, const LearningRates& rates,
                        int steps, double tol, int max_levels,
                        const TrainOptions& options) {
  if (steps < 1) throw InputError("steps must be at least 1");
  TrainResult result{theta0, {}};
  for (int t = 0; t < steps; ++t) {
    try {
      GsppmResult step = gsppm_solve(game, result.theta, rates, tol,
                                     max_levels, update_options(options, t));
      result.theta = std::move(step.theta);
      result.trace.append(step.trace);
    } catch (const NumericError& e) {
      throw e.with_update(t);
    }
  }
  return result;
}

std::optional<int> first_passage(const DifferentiableGame& game,
                                 const JointParams& theta0,
                                 const LearningRates& rates, int levels,
                                 int max_updates, OptimizerConfig config,
                                 const Vector& reference, double radius) {
  if (max_updates < 0) throw InputError("max_updates must be non-negative");
  check_reference(game, reference);
  Optimizer optimizer(config, game.layout());
  JointParams theta = theta0;
  for (int t = 0; t <= max_updates; ++t) {
    if (game.distance(theta.flat(), reference) < radius) return t;
    if (t == max_updates) break;
    try {
      theta = kpg_update(game, theta, rates, levels, optimizer).theta;
    } catch (const NumericError& e) {
      throw e.with_update(t);
    }
  }
  return std::nullopt;
}

}  // namespace kpg
