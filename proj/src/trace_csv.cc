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

#include "kpg/trace_csv.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "kpg/errors.h"

namespace kpg {
namespace {

const std::vector<std::string> kColumns = {"update",   "k",         "agent",
                                           "step_dist", "dist_star", "bound_t1",
                                           "return"};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
  return s;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InputError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(file, line)) lines.push_back(strip(line));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

[[noreturn]] void bad(const std::string& path, std::size_t line,
                      const std::string& what) {
  throw InputError(path + ":" + std::to_string(line) + ": " + what);
}

int parse_int(const std::string& s, const std::string& path, std::size_t line,
              const std::string& column) {
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    bad(path, line, "column '" + column + "' expects an integer, got '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s, const std::string& path,
                    std::size_t line, const std::string& column) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    bad(path, line, "column '" + column + "' expects a number, got '" + s + "'");
  }
  return v;
}

std::optional<double> optional_double(const std::string& s,
                                      const std::string& path, std::size_t line,
                                      const std::string& column) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, path, line, column);
}

void field(std::ostream& out, const std::optional<double>& v) {
  out << ',';
  if (v) out << format_double(*v);
}

}  // namespace

std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << kTraceHeader << '\n';
  for (const TraceRow& row : rows) {
    out << row.update << ',' << row.level << ',';
    if (row.agent) out << *row.agent;
    field(out, row.step_dist);
    field(out, row.dist_star);
    field(out, row.bound_t1);
    field(out, row.ret);
    out << '\n';
  }
}

void write_params_csv(std::ostream& out, const std::vector<ParamRow>& params) {
  out << "update,k";
  const Eigen::Index dim = params.empty() ? 0 : params.front().theta.size();
  for (Eigen::Index j = 0; j < dim; ++j) out << ",theta_" << j;
  out << '\n';
  for (const ParamRow& p : params) {
    out << p.update << ',' << p.level;
    for (Eigen::Index j = 0; j < p.theta.size(); ++j) {
      out << ',' << format_double(p.theta[j]);
    }
    out << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw InputError(path + ": empty file, expected header");
  const std::vector<std::string> header = split(lines[0]);
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    if (c >= header.size()) bad(path, 1, "missing column '" + kColumns[c] + "'");
    if (header[c] != kColumns[c]) {
      bad(path, 1, "column " + std::to_string(c + 1) + " is '" + header[c] +
                       "', expected '" + kColumns[c] + "'");
    }
  }
  if (header.size() > kColumns.size()) {
    bad(path, 1, "unexpected column '" + header[kColumns.size()] + "'");
  }
  if (lines.size() < 2) throw InputError(path + ": no data rows to plot");

  std::vector<TraceRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = split(lines[i]);
    if (f.size() != kColumns.size()) {
      bad(path, i + 1, "expected " + std::to_string(kColumns.size()) +
                           " fields, got " + std::to_string(f.size()));
    }
    TraceRow row;
    row.update = parse_int(f[0], path, i + 1, kColumns[0]);
    row.level = parse_int(f[1], path, i + 1, kColumns[1]);
    if (!f[2].empty()) row.agent = parse_int(f[2], path, i + 1, kColumns[2]);
    row.step_dist = optional_double(f[3], path, i + 1, kColumns[3]);
    row.dist_star = optional_double(f[4], path, i + 1, kColumns[4]);
    row.bound_t1 = optional_double(f[5], path, i + 1, kColumns[5]);
    row.ret = optional_double(f[6], path, i + 1, kColumns[6]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ParamRow> read_params_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw InputError(path + ": empty file, expected header");
  const std::vector<std::string> header = split(lines[0]);
  if (header.size() < 3 || header[0] != "update" || header[1] != "k") {
    bad(path, 1, "expected header 'update,k,theta_0,...'");
  }
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c] != "theta_" + std::to_string(c - 2)) {
      bad(path, 1, "column " + std::to_string(c + 1) + " is '" + header[c] +
                       "', expected 'theta_" + std::to_string(c - 2) + "'");
    }
  }
  std::vector<ParamRow> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = split(lines[i]);
    if (f.size() != header.size()) {
      bad(path, i + 1, "expected " + std::to_string(header.size()) + " fields");
    }
    ParamRow p;
    p.update = parse_int(f[0], path, i + 1, "update");
    p.level = parse_int(f[1], path, i + 1, "k");
    p.theta.resize(static_cast<Eigen::Index>(f.size() - 2));
    for (std::size_t c = 2; c < f.size(); ++c) {
      p.theta[c - 2] = parse_double(f[c], path, i + 1, header[c]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write " + path);
  file << contents;
  if (!file) throw InputError("failed writing " + path);
}

}  // namespace kpg
