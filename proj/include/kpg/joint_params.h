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

#ifndef KPG_JOINT_PARAMS_H_
#define KPG_JOINT_PARAMS_H_

#include <vector>

#include <Eigen/Dense>

namespace kpg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Per-agent parameter dimensions and their offsets into the stacked joint
// vector theta = [theta_1, ..., theta_n]. Agent order is construction order
// and every block assembly in the library follows it.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::vector<int> dims);

  int num_agents() const { return static_cast<int>(dims_.size()); }
  int total_dim() const { return total_dim_; }
  int dim(int agent) const { return dims_.at(agent); }
  int offset(int agent) const { return offsets_.at(agent); }
  // Size of theta_{-i}.
  int complement_dim(int agent) const { return total_dim_ - dim(agent); }
  const std::vector<int>& dims() const { return dims_; }

  // Joint-vector indices that make up theta_{-i}, ascending.
  std::vector<int> complement_indices(int agent) const;

  bool operator==(const Layout& other) const { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
};

Vector pack(const Layout& layout, const std::vector<Vector>& segments);
std::vector<Vector> unpack(const Layout& layout, const Vector& flat);

// theta_{-i} gathered from a joint vector.
Vector complement(const Layout& layout, int agent, const Vector& flat);

// Joint vector whose agent-i segment comes from `own` and whose remaining
// segments come from `others`. This is the (theta_i, theta_{-i}^{(k-1)})
// argument of every level update.
Vector splice(const Layout& layout, int agent, const Vector& own,
              const Vector& others);

// A joint vector tied to its layout.
class JointParams {
 public:
  JointParams(Layout layout, Vector flat);
  static JointParams from_segments(Layout layout,
                                   const std::vector<Vector>& segments);

  const Layout& layout() const { return layout_; }
  const Vector& flat() const { return flat_; }
  Vector& flat() { return flat_; }
  int total_dim() const { return layout_.total_dim(); }
  int num_agents() const { return layout_.num_agents(); }

  Eigen::VectorBlock<const Vector> segment(int agent) const {
    return flat_.segment(layout_.offset(agent), layout_.dim(agent));
  }
  Eigen::VectorBlock<Vector> segment(int agent) {
    return flat_.segment(layout_.offset(agent), layout_.dim(agent));
  }
  std::vector<Vector> segments() const { return unpack(layout_, flat_); }

 private:
  Layout layout_;
  Vector flat_;
};

}  // namespace kpg

#endif  // KPG_JOINT_PARAMS_H_
