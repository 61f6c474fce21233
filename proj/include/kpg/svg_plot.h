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

#ifndef KPG_SVG_PLOT_H_
#define KPG_SVG_PLOT_H_

#include <optional>
#include <string>
#include <vector>

#include "kpg/trace.h"

namespace kpg {

enum class PlotKind { kTrajectory, kKConvergence, kLearningCurve };

PlotKind plot_kind_from_string(const std::string& name);
std::string to_string(PlotKind kind);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

// Series extraction. Each throws InputError when the trace has nothing of
// the requested kind.
//   trajectory:     (theta_0, theta_1) over updates, one series per level k
//   k-convergence:  dist_star against k for one update (default: first
//                   update with dist_star values)
//   learning-curve: return against update, one series per agent
Figure trajectory_figure(const std::vector<ParamRow>& params);
Figure k_convergence_figure(const std::vector<TraceRow>& rows,
                            std::optional<int> update = {});
Figure learning_curve_figure(const std::vector<TraceRow>& rows);

// Self-contained SVG 1.1 document.
std::string render_svg(const Figure& figure);

// "<stem>.trace.csv" -> "<stem>.params.csv"
std::string params_path_for(const std::string& trace_path);

// Reads the trace (and the params sidecar for trajectories) and writes
// the SVG.
void plot_trace_file(const std::string& trace_path, PlotKind kind,
                     const std::string& out_path,
                     std::optional<int> update = {});

}  // namespace kpg

#endif  // KPG_SVG_PLOT_H_
