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

#include "kpg/finite_diff.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kpg/errors.h"

namespace kpg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double step_for(std::optional<double> step, double x, bool second_order) {
  if (step) return *step;
  return second_order ? default_hessian_step(x) : default_gradient_step(x);
}

void check_step(std::optional<double> step) {
  if (step && !(*step > 0.0 && std::isfinite(*step))) {
    throw InputError("finite-difference step must be positive and finite");
  }
}

void check_inputs(const DifferentiableGame& game, int agent,
                  const Vector& theta) {
  if (agent < 0 || agent >= game.num_agents()) {
    throw InputError("agent index " + std::to_string(agent) + " out of range");
  }
  if (theta.size() != game.total_dim()) {
    throw InputError("joint vector has length " + std::to_string(theta.size()) +
                     ", game expects " + std::to_string(game.total_dim()));
  }
  if (!game.region().contains(theta)) {
    throw InputError("theta lies outside the game region");
  }
}

double eval(const DifferentiableGame& game, int agent, const Vector& theta,
            int coordinate) {
  double v = game.objective(agent, theta);
  if (!std::isfinite(v)) {
    NumericContext ctx;
    ctx.agent = agent;
    ctx.coordinate = coordinate;
    throw NumericError("non-finite objective during finite differencing", ctx);
  }
  return v;
}

Vector eval_gradient(const DifferentiableGame& game, int agent,
                     const Vector& theta, int coordinate) {
  Vector g = game.gradient(agent, theta);
  if (!g.allFinite()) {
    NumericContext ctx;
    ctx.agent = agent;
    ctx.coordinate = coordinate;
    throw NumericError("non-finite gradient during finite differencing", ctx);
  }
  return g;
}

}  // namespace

double default_gradient_step(double x) {
  return std::cbrt(kEps) * std::max(1.0, std::abs(x));
}

double default_hessian_step(double x) {
  return std::sqrt(std::sqrt(kEps)) * std::max(1.0, std::abs(x));
}

namespace internal {

Vector central_gradient(const DifferentiableGame& game, int agent,
                        const Vector& theta, std::optional<double> step) {
  const Layout& layout = game.layout();
  const int offset = layout.offset(agent);
  Vector g(layout.dim(agent));
  Vector probe = theta;
  for (int c = 0; c < layout.dim(agent); ++c) {
    const int j = offset + c;
    const double h = step_for(step, theta[j], false);
    probe[j] = theta[j] + h;
    const double fwd = eval(game, agent, probe, j);
    probe[j] = theta[j] - h;
    const double bwd = eval(game, agent, probe, j);
    probe[j] = theta[j];
    g[c] = (fwd - bwd) / (2.0 * h);
  }
  return g;
}

}  // namespace internal

Vector fd_gradient(const DifferentiableGame& game, int agent,
                   const Vector& theta, std::optional<double> step) {
  check_step(step);
  check_inputs(game, agent, theta);
  return internal::central_gradient(game, agent, theta, step);
}

AgentHessian fd_hessian_blocks(const DifferentiableGame& game, int agent,
                               const Vector& theta,
                               std::optional<double> step) {
  check_step(step);
  check_inputs(game, agent, theta);
  const Layout& layout = game.layout();
  const int d = layout.dim(agent);
  const int n_total = layout.total_dim();

  // Rows: agent-i gradient components. Columns: every joint coordinate.
  Matrix jac(d, n_total);
  Vector probe = theta;
  for (int j = 0; j < n_total; ++j) {
    const double h = step_for(step, theta[j], true);
    probe[j] = theta[j] + h;
    Vector fwd = eval_gradient(game, agent, probe, j);
    probe[j] = theta[j] - h;
    Vector bwd = eval_gradient(game, agent, probe, j);
    probe[j] = theta[j];
    jac.col(j) = (fwd - bwd) / (2.0 * h);
  }

  const std::vector<int> others = layout.complement_indices(agent);
  const int m = static_cast<int>(others.size());
  AgentHessian out;
  out.own = jac.middleCols(layout.offset(agent), d);
  out.cross.resize(d, m);
  for (int c = 0; c < m; ++c) out.cross.col(c) = jac.col(others[c]);

  // C_i needs second derivatives of J_i in directions agent i does not own,
  // which the agent-i gradient does not provide.
  out.others.resize(m, m);
  const double f0 = eval(game, agent, theta, -1);
  for (int a = 0; a < m; ++a) {
    const int ja = others[a];
    const double ha = step_for(step, theta[ja], true);
    probe[ja] = theta[ja] + ha;
    const double fp = eval(game, agent, probe, ja);
    probe[ja] = theta[ja] - ha;
    const double fm = eval(game, agent, probe, ja);
    probe[ja] = theta[ja];
    out.others(a, a) = (fp - 2.0 * f0 + fm) / (ha * ha);
    for (int b = a + 1; b < m; ++b) {
      const int jb = others[b];
      const double hb = step_for(step, theta[jb], true);
      auto at = [&](double sa, double sb) {
        probe[ja] = theta[ja] + sa * ha;
        probe[jb] = theta[jb] + sb * hb;
        const double v = eval(game, agent, probe, ja);
        probe[ja] = theta[ja];
        probe[jb] = theta[jb];
        return v;
      };
      const double v =
          (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * ha * hb);
      out.others(a, b) = v;
      out.others(b, a) = v;
    }
  }
  return out;
}

}  // namespace kpg
