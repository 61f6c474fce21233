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

#ifndef KPG_TABULAR_H_
#define KPG_TABULAR_H_

#include <cstdint>
#include <vector>

#include "kpg/engine.h"
#include "kpg/game.h"
#include "kpg/trace.h"

namespace kpg {

// Finite discounted Markov game. Joint actions are flattened in mixed radix
// with agent 0 most significant.
//
//   transition[s](a, s') = P(s' | s, a)
//   reward[i](s, a)      = R_i(s, a)
class TabularMarkovGame {
 public:
  TabularMarkovGame(int num_states, std::vector<int> action_counts,
                    std::vector<Matrix> transition, std::vector<Matrix> reward,
                    double gamma, Vector iota);

  int num_states() const { return num_states_; }
  int num_agents() const { return static_cast<int>(action_counts_.size()); }
  int num_actions(int agent) const { return action_counts_.at(agent); }
  int num_joint_actions() const { return num_joint_; }
  double gamma() const { return gamma_; }
  const Vector& iota() const { return iota_; }
  const Matrix& transition(int state) const { return transition_.at(state); }
  const Matrix& reward(int agent) const { return reward_.at(agent); }

  int joint_index(const std::vector<int>& actions) const;
  std::vector<int> decode(int joint) const;
  // Action of `agent` inside joint action `joint`.
  int action_of(int joint, int agent) const;

 private:
  int num_states_;
  std::vector<int> action_counts_;
  std::vector<int> strides_;
  int num_joint_;
  std::vector<Matrix> transition_;
  std::vector<Matrix> reward_;
  double gamma_;
  Vector iota_;
};

// One-shot matrix game (single absorbing state, gamma = 0). `values` is the
// payoff tensor in joint-action order; with shared = false it carries a
// trailing agent axis, i.e. values[joint * n + i] = R_i(joint).
TabularMarkovGame matrix_game_make(std::vector<int> action_counts,
                                   const std::vector<double>& values,
                                   bool shared);

// Two-agent cooperative game with a shared payoff matrix.
TabularMarkovGame cooperative_matrix_game(const Matrix& payoff);

// Per-agent logits, one S x |A_i| matrix per agent.
using JointLogits = std::vector<Matrix>;

// Row-wise softmax.
Matrix softmax_rows(const Matrix& logits);

// Uniform policies (all-zero logits) for every agent.
JointLogits uniform_logits(const TabularMarkovGame& game);

struct PolicyEvaluation {
  std::vector<Vector> V;  // per agent, S
  std::vector<Matrix> Q;  // per agent, S x joint
  std::vector<Matrix> A;  // per agent, S x joint
  Vector occupancy;       // (1 - gamma) iota^T (I - gamma P)^-1
  Matrix joint_policy;    // S x joint
  std::vector<double> returns;  // iota^T V_i
};

PolicyEvaluation exact_policy_eval(const TabularMarkovGame& game,
                                   const JointLogits& logits);

enum class SurrogateMode { kStandard, kLiteral };

SurrogateMode surrogate_mode_from_string(const std::string& name);
std::string to_string(SurrogateMode mode);

// Exact gradient, over agent i's logits, of
//   1/(1-gamma) E_{s~d0, a~pi0} [ min(r A_i, clip(r) A_i) ]      (standard)
//   1/(1-gamma) E_{s~d0, a~pi0} [ min(r, clip(r)) A_i ]          (literal)
// with r = pi_i / pi0_i * prod_{j != i} pi^k_j / pi0_j and A_i the level-0
// advantage. others_k holds a table for every agent; entry i is ignored.
Matrix kmappo_gradient(const TabularMarkovGame& game, const JointLogits& logits0,
                       int agent, const Matrix& logits_i,
                       const JointLogits& others_k, double eps_clip,
                       SurrogateMode mode = SurrogateMode::kStandard);

// Same as above with the level-0 evaluation supplied by the caller.
Matrix kmappo_gradient(const TabularMarkovGame& game, const JointLogits& logits0,
                       const PolicyEvaluation& eval0, int agent,
                       const Matrix& logits_i, const JointLogits& others_k,
                       double eps_clip, SurrogateMode mode);

// Exact-Q deterministic policy gradient on a one-shot differentiable game:
// grad_i J_i(theta_i, theta^k_{-i}).
Vector kmaddpg_gradient(const DifferentiableGame& game, int agent,
                        const Vector& theta, const Vector& others_k);

// 1/(1-gamma) sum_s d(s) sum_a pi0(a|s) r(a|s) A0_i(s, a) where d is the
// occupancy of `logits_new` (exact) or of logits0 (first order).
double pdl_estimate(const TabularMarkovGame& game, const JointLogits& logits0,
                    const JointLogits& logits_new, int agent,
                    bool new_occupancy);

struct TabularTrainOptions {
  double eps_clip = 0.2;
  SurrogateMode mode = SurrogateMode::kStandard;
  double init_scale = 0.0;
  std::uint64_t seed = 0;
};

struct TabularTrainResult {
  JointLogits logits;
  ConvergenceTrace trace;  // one return row per agent and update
  std::vector<double> joint_returns;  // mean over agents, per update
};

// Per update: freeze logits0, run K re-anchored levels of kmappo_gradient
// ascent, commit level K, record exact returns.
TabularTrainResult kpg_tabular_train(const TabularMarkovGame& game, int levels,
                                     const LearningRates& rates, int steps,
                                     const TabularTrainOptions& options = {});

}  // namespace kpg

#endif  // KPG_TABULAR_H_
