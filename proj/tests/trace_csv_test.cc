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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "kpg/errors.h"

namespace kpg {
namespace {

std::string temp_file(const std::string& name, const std::string& contents) {
  const std::filesystem::path p =
      std::filesystem::temp_directory_path() / ("kpg_trace_test_" + name);
  std::ofstream(p) << contents;
  return p.string();
}

TEST_CASE("doubles print with seventeen significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
}

TEST_CASE("rows round-trip with empty fields") {
  std::vector<TraceRow> rows(3);
  rows[0] = {0, 0, std::nullopt, std::nullopt, 1.5, std::nullopt, std::nullopt};
  rows[1] = {0, 1, std::nullopt, 0.25, 1.25, 0.5, std::nullopt};
  rows[2] = {0, 1, 1, std::nullopt, std::nullopt, std::nullopt, -0.75};
  std::ostringstream out;
  write_trace_csv(out, rows);
  const std::string text = out.str();
  CHECK(text.rfind(std::string(kTraceHeader) + "\n", 0) == 0);
  CHECK(text.find("\n0,0,,,1.5,,\n") != std::string::npos);
  const std::vector<TraceRow> back = read_trace_csv(temp_file("ok.csv", text));
  REQUIRE(back.size() == 3);
  CHECK(back[1].step_dist == 0.25);
  CHECK(back[2].agent == 1);
  CHECK(back[2].ret == -0.75);
  CHECK_FALSE(back[0].step_dist.has_value());
}

TEST_CASE("params round-trip") {
  Vector t(2);
  t << 0.1, -3.0;
  std::ostringstream out;
  write_params_csv(out, {{2, 1, t}});
  CHECK(out.str().rfind("update,k,theta_0,theta_1\n", 0) == 0);
  const auto back = read_params_csv(temp_file("params.csv", out.str()));
  REQUIRE(back.size() == 1);
  CHECK(back[0].theta == t);
  CHECK(back[0].level == 1);
}

TEST_CASE("malformed traces name the offending column") {
  const std::string header = std::string(kTraceHeader) + "\n";
  auto message = [&](const std::string& name, const std::string& body) {
    try {
      read_trace_csv(temp_file(name, body));
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("empty.csv", header).find("no data rows") != std::string::npos);
  CHECK(message("bad.csv", header + "0,1,,abc,,,\n").find("step_dist") !=
        std::string::npos);
  CHECK(message("hdr.csv", "update,k,agent\n0,0,\n").find("missing column") !=
        std::string::npos);
  CHECK_THROWS_AS(read_trace_csv("/nonexistent/trace.csv"), InputError);
}

}  // namespace
}  // namespace kpg
