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

#include "kpg/quadratic.h"

#include <algorithm>
#include <string>

#include <Eigen/Eigenvalues>

#include "kpg/errors.h"

namespace kpg {
namespace {

std::vector<int> dims_of(const std::vector<Matrix>& own) {
  std::vector<int> dims;
  dims.reserve(own.size());
  for (const Matrix& p : own) dims.push_back(static_cast<int>(p.rows()));
  return dims;
}

void validate(const Layout& layout, const std::vector<Matrix>& own,
              const std::vector<Matrix>& coupling) {
  if (coupling.size() != own.size()) {
    throw InputError("quadratic game needs one coupling matrix per agent");
  }
  for (int i = 0; i < layout.num_agents(); ++i) {
    const std::string who = "agent " + std::to_string(i);
    const Matrix& p = own[i];
    if (p.rows() != p.cols()) throw InputError(who + ": P must be square");
    if (!p.allFinite() || !coupling[i].allFinite()) {
      throw InputError(who + ": matrices must be finite");
    }
    if ((p - p.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, p.cwiseAbs().maxCoeff())) {
      throw InputError(who + ": P must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(p);
    if (eig.eigenvalues().maxCoeff() >= 0.0) {
      throw InputError(who + ": P must be negative definite (largest "
                       "eigenvalue " +
                       std::to_string(eig.eigenvalues().maxCoeff()) + ")");
    }
    const Matrix& m = coupling[i];
    if (m.rows() != layout.dim(i) || m.cols() != layout.complement_dim(i)) {
      throw InputError(who + ": M must be " + std::to_string(layout.dim(i)) +
                       "x" + std::to_string(layout.complement_dim(i)));
    }
  }
}

}  // namespace

QuadraticGame::QuadraticGame(std::vector<Matrix> own,
                             std::vector<Matrix> coupling,
                             std::optional<Box> region)
    : DifferentiableGame(Layout(dims_of(own)), std::move(region)),
      own_(std::move(own)),
      coupling_(std::move(coupling)) {
  validate(layout(), own_, coupling_);
}

double QuadraticGame::objective(int agent, const Vector& theta) const {
  check_agent(agent);
  check_theta(theta);
  const Vector mine = theta.segment(layout().offset(agent), layout().dim(agent));
  const Vector rest = complement(layout(), agent, theta);
  return 0.5 * mine.dot(own_[agent] * mine) + mine.dot(coupling_[agent] * rest);
}

Vector QuadraticGame::gradient(int agent, const Vector& theta) const {
  check_agent(agent);
  check_theta(theta);
  const Vector mine = theta.segment(layout().offset(agent), layout().dim(agent));
  return own_[agent] * mine +
         coupling_[agent] * complement(layout(), agent, theta);
}

std::optional<AgentHessian> QuadraticGame::analytic_hessian(
    int agent, const Vector& theta) const {
  check_agent(agent);
  check_theta(theta);
  const int m = layout().complement_dim(agent);
  return AgentHessian{own_[agent], coupling_[agent], Matrix::Zero(m, m)};
}

QuadraticGame QuadraticGame::scalar_pair(double c) {
  std::vector<Matrix> own(2, Matrix::Constant(1, 1, -1.0));
  std::vector<Matrix> coupling(2, Matrix::Constant(1, 1, c));
  return QuadraticGame(std::move(own), std::move(coupling));
}

QuadraticGame quadratic_make(int n, std::vector<Matrix> own,
                             std::vector<Matrix> coupling) {
  if (static_cast<int>(own.size()) != n) {
    throw InputError("expected " + std::to_string(n) + " P matrices, got " +
                     std::to_string(own.size()));
  }
  return QuadraticGame(std::move(own), std::move(coupling));
}

}  // namespace kpg
