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

#include "kpg/svg_plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include "kpg/errors.h"
#include "kpg/trace_csv.h"

namespace kpg {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr int kTicks = 5;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                "#bcbd22", "#17becf"};

std::string num(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", x);
  return buffer;
}

std::string tick_label(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3g", x);
  return buffer;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1e-12, std::abs(lo) * 0.05 + 0.5);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.04 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

PlotKind plot_kind_from_string(const std::string& name) {
  if (name == "trajectory") return PlotKind::kTrajectory;
  if (name == "k-convergence") return PlotKind::kKConvergence;
  if (name == "learning-curve") return PlotKind::kLearningCurve;
  throw InputError("unknown plot kind '" + name +
                   "' (expected trajectory, k-convergence or learning-curve)");
}

std::string to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::kTrajectory:
      return "trajectory";
    case PlotKind::kKConvergence:
      return "k-convergence";
    case PlotKind::kLearningCurve:
      return "learning-curve";
  }
  return "trajectory";
}

Figure trajectory_figure(const std::vector<ParamRow>& params) {
  if (params.empty()) throw InputError("no parameter rows to plot");
  if (params.front().theta.size() < 2) {
    throw InputError("trajectory plots need at least two parameters");
  }
  std::map<int, Series> by_level;
  for (const ParamRow& p : params) {
    Series& s = by_level[p.level];
    s.label = "k=" + std::to_string(p.level);
    s.x.push_back(p.theta[0]);
    s.y.push_back(p.theta[1]);
  }
  Figure f{"parameter trajectory by level", "theta_0", "theta_1", {}};
  for (auto& [level, s] : by_level) f.series.push_back(std::move(s));
  return f;
}

Figure k_convergence_figure(const std::vector<TraceRow>& rows,
                            std::optional<int> update) {
  if (!update) {
    for (const TraceRow& r : rows) {
      if (!r.agent && r.dist_star) {
        update = r.update;
        break;
      }
    }
  }
  if (!update) throw InputError("trace has no dist_star values to plot");
  Series s;
  s.label = "update " + std::to_string(*update);
  for (const TraceRow& r : rows) {
    if (r.agent || r.update != *update || !r.dist_star) continue;
    s.x.push_back(r.level);
    s.y.push_back(*r.dist_star);
  }
  if (s.x.empty()) {
    throw InputError("update " + std::to_string(*update) +
                     " has no dist_star values");
  }
  return {"distance to theta* within one update", "k", "dist_star", {s}};
}

Figure learning_curve_figure(const std::vector<TraceRow>& rows) {
  std::map<int, Series> by_agent;
  for (const TraceRow& r : rows) {
    if (!r.agent || !r.ret) continue;
    Series& s = by_agent[*r.agent];
    s.label = "agent " + std::to_string(*r.agent);
    s.x.push_back(r.update);
    s.y.push_back(*r.ret);
  }
  if (by_agent.empty()) throw InputError("trace has no return values to plot");
  Figure f{"return per update", "update", "return", {}};
  for (auto& [agent, s] : by_agent) f.series.push_back(std::move(s));
  return f;
}

std::string render_svg(const Figure& figure) {
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const Series& s : figure.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!std::isfinite(x_lo)) throw InputError("no finite points to plot");
  const Range xr = padded(x_lo, x_hi);
  const Range yr = padded(y_lo, y_hi);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) {
    return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph;
  };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
    << num(kWidth) << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 "
    << num(kWidth) << ' ' << num(kHeight) << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\""
    << num(kHeight) << "\" fill=\"white\"/>\n"
    << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"15\">" << escape(figure.title)
    << "</text>\n"
    << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
    << num(pw) << "\" height=\"" << num(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int t = 0; t <= kTicks; ++t) {
    const double xv = xr.lo + (xr.hi - xr.lo) * t / kTicks;
    const double yv = yr.lo + (yr.hi - yr.lo) * t / kTicks;
    o << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(kTop + ph)
      << "\" x2=\"" << num(px(xv)) << "\" y2=\"" << num(kTop + ph + 5)
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + ph + 20)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">"
      << tick_label(xv) << "</text>\n"
      << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(yv))
      << "\" x2=\"" << num(kLeft) << "\" y2=\"" << num(py(yv))
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(yv) + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << tick_label(yv) << "</text>\n";
  }
  o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
    << escape(figure.x_label) << "</text>\n"
    << "<text x=\"18\" y=\"" << num(kTop + ph / 2)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
    << "transform=\"rotate(-90 18 " << num(kTop + ph / 2) << ")\">"
    << escape(figure.y_label) << "</text>\n";

  for (std::size_t k = 0; k < figure.series.size(); ++k) {
    const Series& s = figure.series[k];
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
    o << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      o << (first ? "" : " ") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
      first = false;
    }
    o << "\"/>\n";
    if (s.x.size() <= 60) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
      }
    }
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
    o << "<line x1=\"" << num(kLeft + pw + 12) << "\" y1=\"" << num(ly)
      << "\" x2=\"" << num(kLeft + pw + 32) << "\" y2=\"" << num(ly)
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << num(kLeft + pw + 38) << "\" y=\"" << num(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string params_path_for(const std::string& trace_path) {
  const std::string suffix = ".trace.csv";
  if (trace_path.size() >= suffix.size() &&
      trace_path.compare(trace_path.size() - suffix.size(), suffix.size(),
                         suffix) == 0) {
    return trace_path.substr(0, trace_path.size() - suffix.size()) +
           ".params.csv";
  }
  return std::filesystem::path(trace_path).replace_extension(".params.csv").string();
}

void plot_trace_file(const std::string& trace_path, PlotKind kind,
                     const std::string& out_path, std::optional<int> update) {
  const std::vector<TraceRow> rows = read_trace_csv(trace_path);
  Figure figure;
  switch (kind) {
    case PlotKind::kTrajectory: {
      const std::string sidecar = params_path_for(trace_path);
      if (!std::filesystem::exists(sidecar)) {
        throw InputError("trajectory plots need the parameter file " + sidecar);
      }
      figure = trajectory_figure(read_params_csv(sidecar));
      break;
    }
    case PlotKind::kKConvergence:
      figure = k_convergence_figure(rows, update);
      break;
    case PlotKind::kLearningCurve:
      figure = learning_curve_figure(rows);
      break;
  }
  write_file(out_path, render_svg(figure));
}

}  // namespace kpg
