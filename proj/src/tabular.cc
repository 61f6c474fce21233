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

#include "kpg/tabular.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/LU>

#include "kpg/errors.h"

namespace kpg {
namespace {

constexpr double kSumTolerance = 1e-12;

std::string state_tag(int s) { return "state " + std::to_string(s); }

}  // namespace

TabularMarkovGame::TabularMarkovGame(int num_states,
                                     std::vector<int> action_counts,
                                     std::vector<Matrix> transition,
                                     std::vector<Matrix> reward, double gamma,
                                     Vector iota)
    : num_states_(num_states),
      action_counts_(std::move(action_counts)),
      num_joint_(1),
      transition_(std::move(transition)),
      reward_(std::move(reward)),
      gamma_(gamma),
      iota_(std::move(iota)) {
  if (num_states_ < 1) throw InputError("need at least one state");
  if (action_counts_.empty()) throw InputError("need at least one agent");
  for (int c : action_counts_) {
    if (c < 1) throw InputError("every agent needs at least one action");
  }
  strides_.assign(action_counts_.size(), 1);
  for (int i = static_cast<int>(action_counts_.size()) - 1; i >= 0; --i) {
    strides_[i] = num_joint_;
    num_joint_ *= action_counts_[i];
  }
  if (!(gamma_ >= 0.0 && gamma_ < 1.0)) {
    throw InputError("gamma must lie in [0, 1)");
  }
  if (static_cast<int>(transition_.size()) != num_states_) {
    throw InputError("need one transition matrix per state");
  }
  for (int s = 0; s < num_states_; ++s) {
    const Matrix& p = transition_[s];
    if (p.rows() != num_joint_ || p.cols() != num_states_) {
      throw InputError(state_tag(s) + ": transition must be joint x states");
    }
    if (!p.allFinite() || (p.array() < 0.0).any()) {
      throw InputError(state_tag(s) + ": transition probabilities must be "
                       "finite and non-negative");
    }
    for (int a = 0; a < num_joint_; ++a) {
      if (std::abs(p.row(a).sum() - 1.0) > kSumTolerance) {
        throw InputError(state_tag(s) + ", joint action " + std::to_string(a) +
                         ": transition row does not sum to 1");
      }
    }
  }
  if (static_cast<int>(reward_.size()) != num_agents()) {
    throw InputError("need one reward matrix per agent");
  }
  for (int i = 0; i < num_agents(); ++i) {
    if (reward_[i].rows() != num_states_ || reward_[i].cols() != num_joint_) {
      throw InputError("agent " + std::to_string(i) +
                       ": reward must be states x joint");
    }
    if (!reward_[i].allFinite()) {
      throw InputError("agent " + std::to_string(i) + ": rewards must be finite");
    }
  }
  if (iota_.size() != num_states_ || !iota_.allFinite() ||
      (iota_.array() < 0.0).any() ||
      std::abs(iota_.sum() - 1.0) > kSumTolerance) {
    throw InputError("initial distribution must be a probability vector");
  }
}

int TabularMarkovGame::joint_index(const std::vector<int>& actions) const {
  if (actions.size() != action_counts_.size()) {
    throw InputError("joint action has the wrong number of agents");
  }
  int joint = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] < 0 || actions[i] >= action_counts_[i]) {
      throw InputError("action out of range for agent " + std::to_string(i));
    }
    joint += actions[i] * strides_[i];
  }
  return joint;
}

std::vector<int> TabularMarkovGame::decode(int joint) const {
  std::vector<int> actions(action_counts_.size());
  for (int i = 0; i < num_agents(); ++i) actions[i] = action_of(joint, i);
  return actions;
}

int TabularMarkovGame::action_of(int joint, int agent) const {
  return (joint / strides_.at(agent)) % action_counts_[agent];
}

TabularMarkovGame matrix_game_make(std::vector<int> action_counts,
                                   const std::vector<double>& values,
                                   bool shared) {
  const int n = static_cast<int>(action_counts.size());
  if (n < 2) throw InputError("a matrix game needs at least two agents");
  int joint = 1;
  for (int c : action_counts) {
    if (c < 1) throw InputError("every agent needs at least one action");
    joint *= c;
  }
  const int expected = shared ? joint : joint * n;
  if (static_cast<int>(values.size()) != expected) {
    throw InputError("payoff tensor has " + std::to_string(values.size()) +
                     " entries, expected " + std::to_string(expected));
  }
  std::vector<Matrix> reward(n, Matrix(1, joint));
  for (int a = 0; a < joint; ++a) {
    for (int i = 0; i < n; ++i) {
      reward[i](0, a) = shared ? values[a] : values[a * n + i];
    }
  }
  std::vector<Matrix> transition(1, Matrix::Ones(joint, 1));
  return TabularMarkovGame(1, std::move(action_counts), std::move(transition),
                           std::move(reward), 0.0, Vector::Ones(1));
}

TabularMarkovGame cooperative_matrix_game(const Matrix& payoff) {
  std::vector<double> values;
  values.reserve(payoff.size());
  for (int r = 0; r < payoff.rows(); ++r) {
    for (int c = 0; c < payoff.cols(); ++c) values.push_back(payoff(r, c));
  }
  return matrix_game_make({static_cast<int>(payoff.rows()),
                           static_cast<int>(payoff.cols())},
                          values, true);
}

Matrix softmax_rows(const Matrix& logits) {
  if (!logits.allFinite()) throw NumericError("non-finite logits");
  Matrix out(logits.rows(), logits.cols());
  for (int r = 0; r < logits.rows(); ++r) {
    const double top = logits.row(r).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(r).array() - top).exp();
    out.row(r) = e / e.sum();
  }
  return out;
}

JointLogits uniform_logits(const TabularMarkovGame& game) {
  JointLogits out;
  for (int i = 0; i < game.num_agents(); ++i) {
    out.push_back(Matrix::Zero(game.num_states(), game.num_actions(i)));
  }
  return out;
}

namespace {

void check_logits(const TabularMarkovGame& game, const JointLogits& logits) {
  if (static_cast<int>(logits.size()) != game.num_agents()) {
    throw InputError("need one logit table per agent");
  }
  for (int i = 0; i < game.num_agents(); ++i) {
    if (logits[i].rows() != game.num_states() ||
        logits[i].cols() != game.num_actions(i)) {
      throw InputError("agent " + std::to_string(i) +
                       ": logit table must be states x actions");
    }
  }
}

std::vector<Matrix> probabilities(const JointLogits& logits) {
  std::vector<Matrix> out;
  out.reserve(logits.size());
  for (const Matrix& l : logits) out.push_back(softmax_rows(l));
  return out;
}

Matrix joint_policy(const TabularMarkovGame& game,
                    const std::vector<Matrix>& probs) {
  Matrix pi(game.num_states(), game.num_joint_actions());
  for (int s = 0; s < game.num_states(); ++s) {
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      double p = 1.0;
      for (int i = 0; i < game.num_agents(); ++i) {
        p *= probs[i](s, game.action_of(a, i));
      }
      pi(s, a) = p;
    }
  }
  return pi;
}

}  // namespace

PolicyEvaluation exact_policy_eval(const TabularMarkovGame& game,
                                   const JointLogits& logits) {
  check_logits(game, logits);
  const int S = game.num_states();
  const int J = game.num_joint_actions();
  const double gamma = game.gamma();

  PolicyEvaluation out;
  out.joint_policy = joint_policy(game, probabilities(logits));

  Matrix p_pi(S, S);
  for (int s = 0; s < S; ++s) {
    p_pi.row(s) = out.joint_policy.row(s) * game.transition(s);
  }
  const Matrix system = Matrix::Identity(S, S) - gamma * p_pi;
  Eigen::FullPivLU<Matrix> lu(system);
  if (!lu.isInvertible()) {
    throw NumericError("policy evaluation system is singular");
  }

  for (int i = 0; i < game.num_agents(); ++i) {
    const Matrix& r = game.reward(i);
    Vector r_pi(S);
    for (int s = 0; s < S; ++s) r_pi[s] = out.joint_policy.row(s).dot(r.row(s));
    Vector v = lu.solve(r_pi);
    Matrix q(S, J);
    for (int s = 0; s < S; ++s) {
      q.row(s) = r.row(s) + gamma * (game.transition(s) * v).transpose();
    }
    Matrix adv = q.colwise() - v;
    out.returns.push_back(game.iota().dot(v));
    out.V.push_back(std::move(v));
    out.Q.push_back(std::move(q));
    out.A.push_back(std::move(adv));
  }
  const Vector visits = lu.transpose().solve(game.iota());
  out.occupancy = (1.0 - gamma) * visits;
  if (!out.occupancy.allFinite()) {
    throw NumericError("non-finite occupancy");
  }
  return out;
}

SurrogateMode surrogate_mode_from_string(const std::string& name) {
  if (name == "standard") return SurrogateMode::kStandard;
  if (name == "literal") return SurrogateMode::kLiteral;
  throw InputError("unknown surrogate mode '" + name +
                   "' (expected standard or literal)");
}

std::string to_string(SurrogateMode mode) {
  return mode == SurrogateMode::kStandard ? "standard" : "literal";
}

Matrix kmappo_gradient(const TabularMarkovGame& game, const JointLogits& logits0,
                       int agent, const Matrix& logits_i,
                       const JointLogits& others_k, double eps_clip,
                       SurrogateMode mode) {
  return kmappo_gradient(game, logits0, exact_policy_eval(game, logits0), agent,
                         logits_i, others_k, eps_clip, mode);
}

Matrix kmappo_gradient(const TabularMarkovGame& game, const JointLogits& logits0,
                       const PolicyEvaluation& eval0, int agent,
                       const Matrix& logits_i, const JointLogits& others_k,
                       double eps_clip, SurrogateMode mode) {
  check_logits(game, logits0);
  check_logits(game, others_k);
  if (agent < 0 || agent >= game.num_agents()) {
    throw InputError("agent index out of range");
  }
  if (logits_i.rows() != game.num_states() ||
      logits_i.cols() != game.num_actions(agent)) {
    throw InputError("agent logit table must be states x actions");
  }
  if (!(eps_clip >= 0.0) || !std::isfinite(eps_clip)) {
    throw InputError("eps_clip must be non-negative");
  }

  const std::vector<Matrix> p0 = probabilities(logits0);
  const std::vector<Matrix> pk = probabilities(others_k);
  const Matrix pi = softmax_rows(logits_i);
  const int n = game.num_agents();
  const Matrix& adv = eval0.A[agent];
  const double lo = 1.0 - eps_clip;
  const double hi = 1.0 + eps_clip;

  Matrix grad = Matrix::Zero(game.num_states(), game.num_actions(agent));
  for (int s = 0; s < game.num_states(); ++s) {
    const double ds = eval0.occupancy[s];
    if (ds == 0.0) continue;
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      const double w = eval0.joint_policy(s, a);
      if (!(w > 0.0)) {
        NumericContext ctx;
        ctx.agent = agent;
        throw NumericError("level-0 joint action has zero probability", ctx);
      }
      const int own = game.action_of(a, agent);
      double r = pi(s, own) / p0[agent](s, own);
      for (int j = 0; j < n; ++j) {
        if (j == agent) continue;
        const int aj = game.action_of(a, j);
        r *= pk[j](s, aj) / p0[j](s, aj);
      }
      const double clipped = std::clamp(r, lo, hi);
      const double A = adv(s, a);
      const bool active = mode == SurrogateMode::kStandard
                              ? r * A <= clipped * A
                              : r <= clipped;
      if (!active) continue;
      const double scale = ds * w * A * r;
      for (int b = 0; b < game.num_actions(agent); ++b) {
        grad(s, b) += scale * ((b == own ? 1.0 : 0.0) - pi(s, b));
      }
    }
  }
  return grad / (1.0 - game.gamma());
}

Vector kmaddpg_gradient(const DifferentiableGame& game, int agent,
                        const Vector& theta, const Vector& others_k) {
  if (theta.size() != game.total_dim() || others_k.size() != game.total_dim()) {
    throw InputError("parameter vectors do not match the game dimension");
  }
  return game.gradient(agent, splice(game.layout(), agent, theta, others_k));
}

double pdl_estimate(const TabularMarkovGame& game, const JointLogits& logits0,
                    const JointLogits& logits_new, int agent,
                    bool new_occupancy) {
  if (agent < 0 || agent >= game.num_agents()) {
    throw InputError("agent index out of range");
  }
  const PolicyEvaluation e0 = exact_policy_eval(game, logits0);
  const PolicyEvaluation e1 = exact_policy_eval(game, logits_new);
  const Vector& d = new_occupancy ? e1.occupancy : e0.occupancy;
  double total = 0.0;
  for (int s = 0; s < game.num_states(); ++s) {
    total += d[s] * e1.joint_policy.row(s).dot(e0.A[agent].row(s));
  }
  return total / (1.0 - game.gamma());
}

TabularTrainResult kpg_tabular_train(const TabularMarkovGame& game, int levels,
                                     const LearningRates& rates, int steps,
                                     const TabularTrainOptions& options) {
  if (levels < 1) throw InputError("K must be at least 1");
  if (steps < 1) throw InputError("steps must be at least 1");
  if (rates.size() != game.num_agents()) {
    throw InputError("expected one learning rate per agent");
  }
  if (!(options.init_scale >= 0.0)) {
    throw InputError("init_scale must be non-negative");
  }

  TabularTrainResult result;
  result.logits = uniform_logits(game);
  if (options.init_scale > 0.0) {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, options.init_scale);
    for (Matrix& l : result.logits) {
      for (Eigen::Index j = 0; j < l.size(); ++j) l.data()[j] = normal(rng);
    }
  }

  const int n = game.num_agents();
  for (int t = 0; t < steps; ++t) {
    const JointLogits anchor = result.logits;
    const PolicyEvaluation eval0 = exact_policy_eval(game, anchor);
    JointLogits previous = anchor;
    for (int k = 1; k <= levels; ++k) {
      JointLogits next = anchor;
      for (int i = 0; i < n; ++i) {
        const Matrix g =
            kmappo_gradient(game, anchor, eval0, i, anchor[i], previous,
                            options.eps_clip, options.mode);
        if (!g.allFinite()) {
          NumericContext ctx;
          ctx.update = t;
          ctx.level = k;
          ctx.agent = i;
          throw NumericError("non-finite surrogate gradient", ctx);
        }
        next[i] += rates[i] * g;
      }
      previous = std::move(next);
    }
    result.logits = std::move(previous);

    const PolicyEvaluation eval = exact_policy_eval(game, result.logits);
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
      TraceRow row;
      row.update = t;
      row.level = levels;
      row.agent = i;
      row.ret = eval.returns[i];
      result.trace.rows.push_back(row);
      mean += eval.returns[i];
    }
    result.joint_returns.push_back(mean / n);
  }
  return result;
}

}  // namespace kpg
