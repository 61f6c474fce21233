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

#ifndef KPG_TRACE_H_
#define KPG_TRACE_H_

#include <optional>
#include <vector>

#include "kpg/joint_params.h"

namespace kpg {

// One record of a run. Metrics that do not apply to a row stay empty; the
// CSV writer emits empty fields for them.
//
// Joint rows (agent empty) carry the level metrics:
//   step_dist = ||theta^(k) - theta^(k-1)||_2  (absent at k = 0)
//   dist_star = ||theta^(k) - theta*||_2       (when a reference is known)
//   bound_t1  = theoretical bound on the row's measured quantity
// Agent rows carry per-agent returns.
struct TraceRow {
  int update = 0;
  int level = 0;
  std::optional<int> agent;
  std::optional<double> step_dist;
  std::optional<double> dist_star;
  std::optional<double> bound_t1;
  std::optional<double> ret;
};

// Joint parameters after `level` reasoning steps of update `update`.
struct ParamRow {
  int update = 0;
  int level = 0;
  Vector theta;
};

// Rows are appended in (update, level) order.
struct ConvergenceTrace {
  std::vector<TraceRow> rows;
  std::vector<ParamRow> params;

  void append(const ConvergenceTrace& other);
};

}  // namespace kpg

#endif  // KPG_TRACE_H_
