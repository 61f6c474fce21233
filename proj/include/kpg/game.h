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

#ifndef KPG_GAME_H_
#define KPG_GAME_H_

#include <functional>
#include <optional>
#include <string>

#include "kpg/joint_params.h"

namespace kpg {

// Axis-aligned box in joint parameter space.
struct Box {
  Vector lower;
  Vector upper;

  static Box uniform(int dim, double lo, double hi);
  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vector& theta) const;
};

inline constexpr double kDefaultRegionHalfWidth = 5.0;

// Hessian of J_i at one point, split by parameter ownership:
//   own    = d2 J_i / d theta_i d theta_i        (A_i)
//   cross  = d2 J_i / d theta_i d theta_{-i}     (B_i)
//   others = d2 J_i / d theta_{-i} d theta_{-i}  (C_i)
struct AgentHessian {
  Matrix own;
  Matrix cross;
  Matrix others;
};

// An N-player differentiable general-sum game. Each agent i maximizes its
// own objective J_i(theta) over its segment theta_i of the joint vector.
//
// Implementations must be pure: every method is safe to call concurrently.
class DifferentiableGame {
 public:
  explicit DifferentiableGame(Layout layout, std::optional<Box> region = {});
  virtual ~DifferentiableGame() = default;

  const Layout& layout() const { return layout_; }
  int num_agents() const { return layout_.num_agents(); }
  int total_dim() const { return layout_.total_dim(); }
  const Box& region() const { return region_; }

  virtual std::string name() const = 0;
  virtual double objective(int agent, const Vector& theta) const = 0;

  // Gradient of J_i with respect to theta_i. Games without a closed form
  // fall back to central finite differences.
  virtual Vector gradient(int agent, const Vector& theta) const;
  virtual bool has_analytic_gradient() const { return false; }

  virtual std::optional<AgentHessian> analytic_hessian(
      int agent, const Vector& theta) const {
    (void)agent;
    (void)theta;
    return std::nullopt;
  }

  // a - b in parameter space. Periodic parameterizations override this so
  // distances are measured on the torus.
  virtual Vector difference(const Vector& a, const Vector& b) const {
    return a - b;
  }

  // Analytically known stationary point, when the game has one.
  virtual std::optional<Vector> known_equilibrium() const {
    return std::nullopt;
  }

  double distance(const Vector& a, const Vector& b) const {
    return difference(a, b).norm();
  }

 protected:
  void check_agent(int agent) const;
  void check_theta(const Vector& theta) const;

 private:
  Layout layout_;
  Box region_;
};

// Game assembled from callables. Handy for ad hoc objectives and for
// hiding an analytic gradient so the finite-difference path is exercised.
class FunctionGame : public DifferentiableGame {
 public:
  using Objective = std::function<double(int, const Vector&)>;
  using Gradient = std::function<Vector(int, const Vector&)>;

  FunctionGame(Layout layout, Objective objective, Gradient gradient = {},
               std::optional<Box> region = {}, std::string name = "function");

  std::string name() const override { return name_; }
  double objective(int agent, const Vector& theta) const override;
  Vector gradient(int agent, const Vector& theta) const override;
  bool has_analytic_gradient() const override {
    return static_cast<bool>(gradient_);
  }

 private:
  Objective objective_;
  Gradient gradient_;
  std::string name_;
};

}  // namespace kpg

#endif  // KPG_GAME_H_
