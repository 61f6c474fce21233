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

#ifndef KPG_QUADRATIC_H_
#define KPG_QUADRATIC_H_

#include <vector>

#include "kpg/game.h"

namespace kpg {

// J_i(theta) = 1/2 theta_i^T P_i theta_i + theta_i^T M_i theta_{-i}
//
// P_i is symmetric negative definite and there is no linear term, so the
// origin is a stationary point of every J_i. The Hessian blocks are exact:
// A_i = P_i, B_i = M_i, C_i = 0.
class QuadraticGame : public DifferentiableGame {
 public:
  QuadraticGame(std::vector<Matrix> own, std::vector<Matrix> coupling,
                std::optional<Box> region = {});

  std::string name() const override { return "quadratic"; }
  double objective(int agent, const Vector& theta) const override;
  Vector gradient(int agent, const Vector& theta) const override;
  bool has_analytic_gradient() const override { return true; }
  std::optional<AgentHessian> analytic_hessian(
      int agent, const Vector& theta) const override;
  std::optional<Vector> known_equilibrium() const override {
    return Vector::Zero(total_dim());
  }

  const Matrix& own(int agent) const { return own_.at(agent); }
  const Matrix& coupling(int agent) const { return coupling_.at(agent); }

  // Two scalar agents with P = [-1] and M = [c] for both.
  static QuadraticGame scalar_pair(double c);

 private:
  std::vector<Matrix> own_;
  std::vector<Matrix> coupling_;
};

QuadraticGame quadratic_make(int n, std::vector<Matrix> own,
                             std::vector<Matrix> coupling);

}  // namespace kpg

#endif  // KPG_QUADRATIC_H_
