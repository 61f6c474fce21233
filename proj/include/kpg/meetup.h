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

#ifndef KPG_MEETUP_H_
#define KPG_MEETUP_H_

#include <array>

#include "kpg/game.h"

namespace kpg {

// Two point agents on the plane, each choosing the heading angle of a unit
// step from a fixed start. Agent i is rewarded by the cosine similarity
// between its heading and the direction from its start to where the other
// agent lands, minus one. Both agents follow the straight-line policy after
// the first step, so the return equals the first-step reward and lies in
// [-2, 0]. The default region is [-2 pi, 2 pi]^2.
class MeetupGame : public DifferentiableGame {
 public:
  MeetupGame();
  MeetupGame(Eigen::Vector2d iota1, Eigen::Vector2d iota2);

  std::string name() const override { return "meetup"; }
  double objective(int agent, const Vector& theta) const override;
  Vector gradient(int agent, const Vector& theta) const override;
  bool has_analytic_gradient() const override { return true; }
  // Angle differences wrapped into [-pi, pi).
  Vector difference(const Vector& a, const Vector& b) const override;
  std::optional<Vector> known_equilibrium() const override;

  // Both returns (J_1, J_2) for headings (theta1, theta2).
  std::array<double, 2> objectives(double theta1, double theta2) const;
  std::array<double, 2> gradients(double theta1, double theta2) const;

  const Eigen::Vector2d& start(int agent) const { return iota_[agent]; }

 private:
  // Unit vector from agent i's start to the other agent's post-step position.
  Eigen::Vector2d target_direction(int agent, double other_angle) const;

  std::array<Eigen::Vector2d, 2> iota_;
};

std::array<double, 2> meetup_objective(double theta1, double theta2);
std::array<double, 2> meetup_gradient(double theta1, double theta2);

double wrap_angle(double x);

}  // namespace kpg

#endif  // KPG_MEETUP_H_
