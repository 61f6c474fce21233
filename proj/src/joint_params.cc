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

#include "kpg/joint_params.h"

#include <string>

#include "kpg/errors.h"

namespace kpg {

Layout::Layout(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) {
    throw InputError("a game needs at least 2 agents, got " +
                     std::to_string(dims_.size()));
  }
  offsets_.reserve(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 1) {
      throw InputError("agent " + std::to_string(i) +
                       " has parameter dimension " + std::to_string(dims_[i]) +
                       "; every agent needs at least 1");
    }
    offsets_.push_back(total_dim_);
    total_dim_ += dims_[i];
  }
}

std::vector<int> Layout::complement_indices(int agent) const {
  std::vector<int> out;
  out.reserve(complement_dim(agent));
  for (int j = 0; j < num_agents(); ++j) {
    if (j == agent) continue;
    for (int c = 0; c < dims_[j]; ++c) out.push_back(offsets_[j] + c);
  }
  return out;
}

Vector pack(const Layout& layout, const std::vector<Vector>& segments) {
  if (static_cast<int>(segments.size()) != layout.num_agents()) {
    throw InputError("expected " + std::to_string(layout.num_agents()) +
                     " segments, got " + std::to_string(segments.size()));
  }
  Vector flat(layout.total_dim());
  for (int i = 0; i < layout.num_agents(); ++i) {
    if (segments[i].size() != layout.dim(i)) {
      throw InputError("segment " + std::to_string(i) + " has dimension " +
                       std::to_string(segments[i].size()) + ", expected " +
                       std::to_string(layout.dim(i)));
    }
    flat.segment(layout.offset(i), layout.dim(i)) = segments[i];
  }
  return flat;
}

std::vector<Vector> unpack(const Layout& layout, const Vector& flat) {
  if (flat.size() != layout.total_dim()) {
    throw InputError("joint vector has length " + std::to_string(flat.size()) +
                     ", layout expects " + std::to_string(layout.total_dim()));
  }
  std::vector<Vector> out;
  out.reserve(layout.num_agents());
  for (int i = 0; i < layout.num_agents(); ++i) {
    out.emplace_back(flat.segment(layout.offset(i), layout.dim(i)));
  }
  return out;
}

Vector complement(const Layout& layout, int agent, const Vector& flat) {
  Vector out(layout.complement_dim(agent));
  int pos = 0;
  for (int idx : layout.complement_indices(agent)) out[pos++] = flat[idx];
  return out;
}

Vector splice(const Layout& layout, int agent, const Vector& own,
              const Vector& others) {
  Vector out = others;
  out.segment(layout.offset(agent), layout.dim(agent)) =
      own.segment(layout.offset(agent), layout.dim(agent));
  return out;
}

JointParams::JointParams(Layout layout, Vector flat)
    : layout_(std::move(layout)), flat_(std::move(flat)) {
  if (flat_.size() != layout_.total_dim()) {
    throw InputError("joint vector has length " + std::to_string(flat_.size()) +
                     ", layout expects " + std::to_string(layout_.total_dim()));
  }
}

JointParams JointParams::from_segments(Layout layout,
                                       const std::vector<Vector>& segments) {
  Vector flat = pack(layout, segments);
  return JointParams(std::move(layout), std::move(flat));
}

}  // namespace kpg
