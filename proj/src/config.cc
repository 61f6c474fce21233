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

#include "kpg/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kpg/meetup.h"
#include "kpg/quadratic.h"

namespace kpg {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

int line_at(const std::string& text, std::size_t pos) {
  pos = std::min(pos, text.size());
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

// Walks the key path through the raw text. Close enough for error messages
// without a position-tracking parser.
int locate(const std::string& text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  std::size_t found = std::string::npos;
  for (const std::string& key : path) {
    const std::size_t at = text.find("\"" + key + "\"", pos);
    if (at == std::string::npos) break;
    found = at;
    pos = at + key.size() + 2;
  }
  return found == std::string::npos ? 1 : line_at(text, found);
}

class Reader {
 public:
  Reader(const std::string& text, std::string source)
      : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::vector<std::string>& path,
                         const std::string& what) const {
    throw ConfigError(source_, locate(text_, path), what);
  }

  void allow_only(const json& object, const std::vector<std::string>& where,
                  const std::set<std::string>& keys) const {
    for (const auto& item : object.items()) {
      if (!keys.count(item.key())) {
        std::vector<std::string> path = where;
        path.push_back(item.key());
        std::string name = join(path);
        fail(path, "unknown key '" + name + "'");
      }
    }
  }

  static std::string join(const std::vector<std::string>& path) {
    std::string out;
    for (const std::string& p : path) out += (out.empty() ? "" : ".") + p;
    return out;
  }

  double number(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_number()) fail(path, "'" + join(path) + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "'" + join(path) + "' must be finite");
    return x;
  }

  long long integer(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_number_integer()) {
      fail(path, "'" + join(path) + "' must be an integer");
    }
    return v.get<long long>();
  }

  std::string string(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_string()) fail(path, "'" + join(path) + "' must be a string");
    return v.get<std::string>();
  }

  bool boolean(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_boolean()) fail(path, "'" + join(path) + "' must be true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const json& v,
                              const std::vector<std::string>& path) const {
    if (!v.is_array()) fail(path, "'" + join(path) + "' must be an array");
    std::vector<double> out;
    for (const json& x : v) out.push_back(number(x, path));
    return out;
  }

  Matrix matrix(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_array() || v.empty()) {
      fail(path, "'" + join(path) + "' must be a non-empty array of rows");
    }
    const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
    Matrix m(v.size(), cols);
    for (std::size_t r = 0; r < v.size(); ++r) {
      const std::vector<double> row = numbers(v[r], path);
      if (row.size() != cols || cols == 0) {
        fail(path, "'" + join(path) + "' rows must have equal, non-zero length");
      }
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
    }
    return m;
  }

  const std::string& source() const { return source_; }

 private:
  const std::string& text_;
  std::string source_;
};

GameSpec read_game(const Reader& in, const json& g) {
  const std::vector<std::string> at = {"game"};
  if (!g.is_object()) in.fail(at, "'game' must be an object");
  if (!g.contains("kind")) in.fail(at, "missing required key 'game.kind'");
  const std::string kind = in.string(g["kind"], {"game", "kind"});
  GameSpec spec;
  if (kind == "meetup") {
    spec.kind = GameKind::kMeetup;
    in.allow_only(g, at, {"kind", "starts"});
    if (g.contains("starts")) {
      const Matrix s = in.matrix(g["starts"], {"game", "starts"});
      if (s.rows() != 2 || s.cols() != 2) {
        in.fail({"game", "starts"}, "'game.starts' must be [[x1, y1], [x2, y2]]");
      }
      spec.start1 = {s(0, 0), s(0, 1)};
      spec.start2 = {s(1, 0), s(1, 1)};
    }
  } else if (kind == "quadratic") {
    spec.kind = GameKind::kQuadratic;
    in.allow_only(g, at, {"kind", "c", "own", "coupling"});
    if (g.contains("c")) {
      if (g.contains("own") || g.contains("coupling")) {
        in.fail({"game", "c"}, "'game.c' excludes 'game.own' and 'game.coupling'");
      }
      const double c = in.number(g["c"], {"game", "c"});
      spec.own.assign(2, Matrix::Constant(1, 1, -1.0));
      spec.coupling.assign(2, Matrix::Constant(1, 1, c));
    } else {
      if (!g.contains("own")) in.fail(at, "missing required key 'game.own'");
      if (!g.contains("coupling")) {
        in.fail(at, "missing required key 'game.coupling'");
      }
      for (const json& p : g["own"]) spec.own.push_back(in.matrix(p, {"game", "own"}));
      for (const json& m : g["coupling"]) {
        spec.coupling.push_back(in.matrix(m, {"game", "coupling"}));
      }
    }
  } else if (kind == "matrix") {
    spec.kind = GameKind::kMatrix;
    in.allow_only(g, at, {"kind", "actions", "payoff", "shared"});
    if (!g.contains("actions")) in.fail(at, "missing required key 'game.actions'");
    if (!g.contains("payoff")) in.fail(at, "missing required key 'game.payoff'");
    for (double a : in.numbers(g["actions"], {"game", "actions"})) {
      if (a != std::floor(a)) {
        in.fail({"game", "actions"}, "'game.actions' must hold integers");
      }
      spec.actions.push_back(static_cast<int>(a));
    }
    spec.payoff = in.numbers(g["payoff"], {"game", "payoff"});
    if (g.contains("shared")) spec.shared = in.boolean(g["shared"], {"game", "shared"});
  } else {
    in.fail({"game", "kind"},
            "unknown game kind '" + kind + "' (expected meetup, quadratic or matrix)");
  }

  try {
    switch (spec.kind) {
      case GameKind::kMeetup:
        MeetupGame(Eigen::Vector2d(spec.start1[0], spec.start1[1]),
                   Eigen::Vector2d(spec.start2[0], spec.start2[1]));
        break;
      case GameKind::kQuadratic:
        QuadraticGame(spec.own, spec.coupling);
        break;
      case GameKind::kMatrix:
        matrix_game_make(spec.actions, spec.payoff, spec.shared);
        break;
    }
  } catch (const InputError& e) {
    in.fail(at, std::string("invalid game: ") + e.what());
  }
  return spec;
}

OptimizerConfig read_optimizer(const Reader& in, const json& v) {
  const std::vector<std::string> at = {"optimizer"};
  OptimizerConfig config;
  try {
    if (v.is_string()) {
      config.kind = optimizer_kind_from_string(v.get<std::string>());
      return config;
    }
    if (!v.is_object()) in.fail(at, "'optimizer' must be a string or an object");
    in.allow_only(v, at, {"kind", "momentum", "decay", "epsilon"});
    if (v.contains("kind")) {
      config.kind =
          optimizer_kind_from_string(in.string(v["kind"], {"optimizer", "kind"}));
    }
    if (v.contains("momentum")) {
      config.momentum = in.number(v["momentum"], {"optimizer", "momentum"});
    }
    if (v.contains("decay")) config.decay = in.number(v["decay"], {"optimizer", "decay"});
    if (v.contains("epsilon")) {
      config.epsilon = in.number(v["epsilon"], {"optimizer", "epsilon"});
    }
    Optimizer probe(config, Layout({1, 1}));
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& e) {
    in.fail(at, e.what());
  }
  return config;
}

int agents_of(const GameSpec& spec) {
  switch (spec.kind) {
    case GameKind::kMeetup:
      return 2;
    case GameKind::kQuadratic:
      return static_cast<int>(spec.own.size());
    case GameKind::kMatrix:
      return static_cast<int>(spec.actions.size());
  }
  return 0;
}

int joint_dim(const GameSpec& spec) {
  if (spec.kind == GameKind::kMeetup) return 2;
  int d = 0;
  for (const Matrix& p : spec.own) d += static_cast<int>(p.rows());
  return d;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

ordered_json vector_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(v[j]);
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line,
                         const std::string& what)
    : InputError(source + ":" + std::to_string(line) + ": " + what),
      line_(line) {}

std::string to_string(GameKind kind) {
  switch (kind) {
    case GameKind::kMeetup:
      return "meetup";
    case GameKind::kQuadratic:
      return "quadratic";
    case GameKind::kMatrix:
      return "matrix";
  }
  return "meetup";
}

std::string to_string(Algo algo) {
  switch (algo) {
    case Algo::kKpg:
      return "kpg";
    case Algo::kGsppm:
      return "gsppm";
    case Algo::kTabularKmappo:
      return "tabular-kmappo";
  }
  return "kpg";
}

int ExperimentConfig::num_agents() const { return agents_of(game); }

ExperimentConfig parse_config(const std::string& text,
                              const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source, line_at(text, e.byte == 0 ? 0 : e.byte - 1),
                      "syntax error: " + std::string(e.what()));
  }
  const Reader in(text, source);
  if (!root.is_object()) throw ConfigError(source, 1, "config must be an object");
  in.allow_only(root, {},
                {"game", "algo", "K", "eta", "optimizer", "steps", "theta0",
                 "theta_star", "tolerances", "constants", "eps_clip",
                 "surrogate", "init_scale", "seed", "output", "verify"});

  ExperimentConfig c;
  c.source = source;
  if (!root.contains("game")) in.fail({}, "missing required key 'game'");
  c.game = read_game(in, root["game"]);
  const int n = agents_of(c.game);
  const int dim = joint_dim(c.game);

  if (root.contains("algo")) {
    const std::string algo = in.string(root["algo"], {"algo"});
    if (algo == "kpg") {
      c.algo = Algo::kKpg;
    } else if (algo == "gsppm") {
      c.algo = Algo::kGsppm;
    } else if (algo == "tabular-kmappo") {
      c.algo = Algo::kTabularKmappo;
    } else {
      in.fail({"algo"}, "unknown algo '" + algo +
                            "' (expected kpg, gsppm or tabular-kmappo)");
    }
  } else if (c.game.kind == GameKind::kMatrix) {
    c.algo = Algo::kTabularKmappo;
  }
  if ((c.algo == Algo::kTabularKmappo) != (c.game.kind == GameKind::kMatrix)) {
    in.fail({"algo"}, "algo '" + to_string(c.algo) +
                          "' does not apply to game kind '" +
                          to_string(c.game.kind) + "'");
  }

  if (!root.contains("K")) in.fail({}, "missing required key 'K'");
  const long long k = in.integer(root["K"], {"K"});
  if (k < 1 || k > 100000) in.fail({"K"}, "'K' must be a positive integer");
  c.K = static_cast<int>(k);

  c.eta.assign(n, 0.1);
  if (root.contains("eta")) {
    const json& e = root["eta"];
    if (e.is_array()) {
      c.eta = in.numbers(e, {"eta"});
      if (static_cast<int>(c.eta.size()) != n) {
        in.fail({"eta"}, "'eta' needs one entry per agent (" +
                             std::to_string(n) + ")");
      }
    } else {
      c.eta.assign(n, in.number(e, {"eta"}));
    }
    for (double x : c.eta) {
      if (!(x > 0.0)) in.fail({"eta"}, "'eta' entries must be positive");
    }
  }

  if (root.contains("optimizer")) c.optimizer = read_optimizer(in, root["optimizer"]);

  if (root.contains("steps")) {
    const long long s = in.integer(root["steps"], {"steps"});
    if (s < 1) in.fail({"steps"}, "'steps' must be at least 1");
    c.steps = static_cast<int>(s);
  }

  const bool differentiable = c.game.kind != GameKind::kMatrix;
  if (root.contains("theta0")) {
    if (!differentiable) in.fail({"theta0"}, "'theta0' does not apply to matrix games");
    const json& t = root["theta0"];
    if (t.is_string()) {
      if (t.get<std::string>() != "random") {
        in.fail({"theta0"}, "'theta0' must be an array or \"random\"");
      }
      c.random_theta0 = true;
    } else {
      const std::vector<double> v = in.numbers(t, {"theta0"});
      if (static_cast<int>(v.size()) != dim) {
        in.fail({"theta0"}, "'theta0' must have " + std::to_string(dim) + " entries");
      }
      c.theta0 = to_vector(v);
    }
  }
  if (root.contains("theta_star")) {
    if (!differentiable) {
      in.fail({"theta_star"}, "'theta_star' does not apply to matrix games");
    }
    const std::vector<double> v = in.numbers(root["theta_star"], {"theta_star"});
    if (static_cast<int>(v.size()) != dim) {
      in.fail({"theta_star"},
              "'theta_star' must have " + std::to_string(dim) + " entries");
    }
    c.theta_star = to_vector(v);
  }

  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    if (!t.is_object()) in.fail({"tolerances"}, "'tolerances' must be an object");
    in.allow_only(t, {"tolerances"}, {"gsppm"});
    if (t.contains("gsppm")) {
      c.gsppm_tol = in.number(t["gsppm"], {"tolerances", "gsppm"});
      if (!(c.gsppm_tol > 0.0)) {
        in.fail({"tolerances", "gsppm"}, "'tolerances.gsppm' must be positive");
      }
    }
  }
  if (root.contains("constants")) {
    const json& t = root["constants"];
    if (!t.is_object()) in.fail({"constants"}, "'constants' must be an object");
    in.allow_only(t, {"constants"}, {"samples"});
    if (t.contains("samples")) {
      const long long s = in.integer(t["samples"], {"constants", "samples"});
      if (s < 2) in.fail({"constants", "samples"}, "'constants.samples' must be at least 2");
      c.constant_samples = static_cast<int>(s);
    }
  }
  if (root.contains("eps_clip")) {
    c.eps_clip = in.number(root["eps_clip"], {"eps_clip"});
    if (c.eps_clip < 0.0) in.fail({"eps_clip"}, "'eps_clip' must be non-negative");
  }
  if (root.contains("surrogate")) {
    try {
      c.surrogate =
          surrogate_mode_from_string(in.string(root["surrogate"], {"surrogate"}));
    } catch (const ConfigError&) {
      throw;
    } catch (const InputError& e) {
      in.fail({"surrogate"}, e.what());
    }
  }
  if (root.contains("init_scale")) {
    c.init_scale = in.number(root["init_scale"], {"init_scale"});
    if (c.init_scale < 0.0) in.fail({"init_scale"}, "'init_scale' must be non-negative");
  }
  if (root.contains("seed")) {
    const long long s = in.integer(root["seed"], {"seed"});
    if (s < 0) in.fail({"seed"}, "'seed' must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (root.contains("output")) c.output = in.string(root["output"], {"output"});
  if (root.contains("verify")) {
    const json& v = root["verify"];
    if (!v.is_object()) in.fail({"verify"}, "'verify' must be an object");
    in.allow_only(v, {"verify"}, {"starts", "radius", "max_level"});
    if (v.contains("starts")) {
      const long long s = in.integer(v["starts"], {"verify", "starts"});
      if (s < 1) in.fail({"verify", "starts"}, "'verify.starts' must be at least 1");
      c.verify.starts = static_cast<int>(s);
    }
    if (v.contains("radius")) {
      c.verify.radius = in.number(v["radius"], {"verify", "radius"});
      if (!(c.verify.radius > 0.0)) {
        in.fail({"verify", "radius"}, "'verify.radius' must be positive");
      }
    }
    if (v.contains("max_level")) {
      const long long s = in.integer(v["max_level"], {"verify", "max_level"});
      if (s < 1) in.fail({"verify", "max_level"}, "'verify.max_level' must be at least 1");
      c.verify.max_level = static_cast<int>(s);
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError(path, 0, "cannot open config file");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string config_echo(const ExperimentConfig& c) {
  ordered_json game;
  game["kind"] = to_string(c.game.kind);
  switch (c.game.kind) {
    case GameKind::kMeetup:
      game["starts"] = {c.game.start1, c.game.start2};
      break;
    case GameKind::kQuadratic: {
      ordered_json own = ordered_json::array();
      ordered_json coupling = ordered_json::array();
      for (const Matrix& p : c.game.own) own.push_back(matrix_json(p));
      for (const Matrix& m : c.game.coupling) coupling.push_back(matrix_json(m));
      game["own"] = own;
      game["coupling"] = coupling;
      break;
    }
    case GameKind::kMatrix:
      game["actions"] = c.game.actions;
      game["payoff"] = c.game.payoff;
      game["shared"] = c.game.shared;
      break;
  }

  ordered_json out;
  out["game"] = game;
  out["algo"] = to_string(c.algo);
  out["K"] = c.K;
  out["eta"] = c.eta;
  out["optimizer"] = {{"kind", to_string(c.optimizer.kind)},
                      {"momentum", c.optimizer.momentum},
                      {"decay", c.optimizer.decay},
                      {"epsilon", c.optimizer.epsilon}};
  out["steps"] = c.steps;
  if (c.theta0) {
    out["theta0"] = vector_json(*c.theta0);
  } else if (c.random_theta0) {
    out["theta0"] = "random";
  } else {
    out["theta0"] = nullptr;
  }
  out["theta_star"] = c.theta_star ? vector_json(*c.theta_star) : ordered_json(nullptr);
  out["tolerances"] = {{"gsppm", c.gsppm_tol}};
  out["constants"] = {{"samples", c.constant_samples}};
  out["eps_clip"] = c.eps_clip;
  out["surrogate"] = to_string(c.surrogate);
  out["init_scale"] = c.init_scale;
  out["seed"] = c.seed;
  out["output"] = c.output;
  out["verify"] = {{"starts", c.verify.starts},
                   {"radius", c.verify.radius},
                   {"max_level", c.verify.max_level}};
  return out.dump(2) + "\n";
}

}  // namespace kpg
