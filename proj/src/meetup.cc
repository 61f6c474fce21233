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

#include "kpg/meetup.h"

#include <cmath>
#include <numbers>

#include "kpg/errors.h"

namespace kpg {
namespace {

constexpr double kCoincidenceTolerance = 1e-12;

Eigen::Vector2d heading(double angle) {
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

double wrap_angle(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(x + std::numbers::pi, two_pi);
  if (r < 0) r += two_pi;
  return r - std::numbers::pi;
}

MeetupGame::MeetupGame()
    : MeetupGame(Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(3.0, 2.0)) {}

MeetupGame::MeetupGame(Eigen::Vector2d iota1, Eigen::Vector2d iota2)
    : DifferentiableGame(Layout({1, 1}),
                         Box::uniform(2, -2.0 * std::numbers::pi,
                                      2.0 * std::numbers::pi)),
      iota_{iota1, iota2} {
  if (!iota1.allFinite() || !iota2.allFinite()) {
    throw InputError("meet-up start positions must be finite");
  }
  if (iota1 == iota2) {
    throw InputError("meet-up start positions must differ");
  }
}

Eigen::Vector2d MeetupGame::target_direction(int agent,
                                             double other_angle) const {
  const int other = 1 - agent;
  const Eigen::Vector2d landing = iota_[other] + heading(other_angle);
  const Eigen::Vector2d offset = landing - iota_[agent];
  const double norm = offset.norm();
  if (norm < kCoincidenceTolerance) {
    NumericContext ctx;
    ctx.agent = agent;
    throw DegenerateGeometryError(
        "other agent lands on this agent's start; heading is undefined", ctx);
  }
  return offset / norm;
}

std::array<double, 2> MeetupGame::objectives(double theta1,
                                             double theta2) const {
  const double angles[2] = {theta1, theta2};
  std::array<double, 2> out{};
  for (int i = 0; i < 2; ++i) {
    out[i] = heading(angles[i]).dot(target_direction(i, angles[1 - i])) - 1.0;
  }
  return out;
}

std::array<double, 2> MeetupGame::gradients(double theta1,
                                            double theta2) const {
  const double angles[2] = {theta1, theta2};
  std::array<double, 2> out{};
  for (int i = 0; i < 2; ++i) {
    const Eigen::Vector2d d_heading(-std::sin(angles[i]), std::cos(angles[i]));
    out[i] = d_heading.dot(target_direction(i, angles[1 - i]));
  }
  return out;
}

double MeetupGame::objective(int agent, const Vector& theta) const {
  check_agent(agent);
  check_theta(theta);
  return heading(theta[agent]).dot(target_direction(agent, theta[1 - agent])) -
         1.0;
}

Vector MeetupGame::gradient(int agent, const Vector& theta) const {
  check_agent(agent);
  check_theta(theta);
  const Eigen::Vector2d d_heading(-std::sin(theta[agent]),
                                  std::cos(theta[agent]));
  Vector g(1);
  g[0] = d_heading.dot(target_direction(agent, theta[1 - agent]));
  return g;
}

Vector MeetupGame::difference(const Vector& a, const Vector& b) const {
  Vector d = a - b;
  for (Eigen::Index j = 0; j < d.size(); ++j) d[j] = wrap_angle(d[j]);
  return d;
}

std::optional<Vector> MeetupGame::known_equilibrium() const {
  const Eigen::Vector2d line = iota_[1] - iota_[0];
  // Straight-line meeting is only an optimum when a unit step cannot
  // overshoot the other start.
  if (line.norm() <= 1.0) return std::nullopt;
  const double toward = std::atan2(line.y(), line.x());
  Vector star(2);
  star << toward, wrap_angle(toward - std::numbers::pi);
  return star;
}

std::array<double, 2> meetup_objective(double theta1, double theta2) {
  static const MeetupGame game;
  return game.objectives(theta1, theta2);
}

std::array<double, 2> meetup_gradient(double theta1, double theta2) {
  static const MeetupGame game;
  return game.gradients(theta1, theta2);
}

}  // namespace kpg
