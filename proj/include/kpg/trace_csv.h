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

#ifndef KPG_TRACE_CSV_H_
#define KPG_TRACE_CSV_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "kpg/trace.h"

namespace kpg {

inline constexpr const char* kTraceHeader =
    "update,k,agent,step_dist,dist_star,bound_t1,return";

// Shortest-exact decimal form: 17 significant digits.
std::string format_double(double x);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
void write_params_csv(std::ostream& out, const std::vector<ParamRow>& params);

// Throws InputError naming the first column that does not match the
// schema, or when the file has no data rows.
std::vector<TraceRow> read_trace_csv(const std::string& path);
std::vector<ParamRow> read_params_csv(const std::string& path);

void write_file(const std::string& path, const std::string& contents);

}  // namespace kpg

#endif  // KPG_TRACE_CSV_H_
