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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kpg/config.h"
#include "kpg/engine.h"
#include "kpg/errors.h"
#include "kpg/experiment.h"
#include "kpg/meetup.h"
#include "kpg/quadratic.h"
#include "kpg/tabular.h"
#include "kpg/theory.h"

namespace py = pybind11;

namespace {

py::object opt(const std::optional<double>& x) {
  return x ? py::cast(*x) : py::none();
}

py::list rows_to_list(const kpg::ConvergenceTrace& trace) {
  py::list out;
  for (const kpg::TraceRow& r : trace.rows) {
    py::dict d;
    d["update"] = r.update;
    d["k"] = r.level;
    d["agent"] = r.agent ? py::cast(*r.agent) : py::none();
    d["step_dist"] = opt(r.step_dist);
    d["dist_star"] = opt(r.dist_star);
    d["bound_t1"] = opt(r.bound_t1);
    d["return"] = opt(r.ret);
    out.append(d);
  }
  return out;
}

py::dict report_to_dict(const kpg::SuiteReport& r) {
  py::dict d;
  d["theorem"] = r.theorem;
  d["status"] = kpg::to_string(r.status);
  d["checked"] = r.checked;
  d["violations"] = r.violations;
  d["note"] = r.note;
  d["metrics"] = r.metrics;
  return d;
}

kpg::JointParams joint(const kpg::DifferentiableGame& game,
                       const kpg::Vector& theta) {
  return kpg::JointParams(game.layout(), theta);
}

kpg::OptimizerConfig optimizer_config(const std::string& kind) {
  kpg::OptimizerConfig c;
  c.kind = kpg::optimizer_kind_from_string(kind);
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "k-level policy gradient lab";

  auto input_error =
      py::register_exception<kpg::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<kpg::NumericError>(m, "NumericError",
                                            PyExc_ArithmeticError);
  (void)input_error;

  py::class_<kpg::DifferentiableGame>(m, "Game")
      .def_property_readonly("name", &kpg::DifferentiableGame::name)
      .def_property_readonly("num_agents", &kpg::DifferentiableGame::num_agents)
      .def_property_readonly("total_dim", &kpg::DifferentiableGame::total_dim)
      .def("objective", &kpg::DifferentiableGame::objective, py::arg("agent"),
           py::arg("theta"))
      .def("gradient", &kpg::DifferentiableGame::gradient, py::arg("agent"),
           py::arg("theta"))
      .def("distance", &kpg::DifferentiableGame::distance)
      .def("known_equilibrium", &kpg::DifferentiableGame::known_equilibrium);

  py::class_<kpg::MeetupGame, kpg::DifferentiableGame>(m, "MeetupGame")
      .def(py::init<>())
      .def(py::init([](const std::vector<double>& a, const std::vector<double>& b) {
             if (a.size() != 2 || b.size() != 2) {
               throw kpg::InputError("starts must be 2-vectors");
             }
             return kpg::MeetupGame(Eigen::Vector2d(a[0], a[1]),
                                    Eigen::Vector2d(b[0], b[1]));
           }),
           py::arg("start1"), py::arg("start2"));

  py::class_<kpg::QuadraticGame, kpg::DifferentiableGame>(m, "QuadraticGame")
      .def(py::init([](std::vector<kpg::Matrix> own,
                       std::vector<kpg::Matrix> coupling) {
             return kpg::QuadraticGame(std::move(own), std::move(coupling));
           }),
           py::arg("own"), py::arg("coupling"))
      .def_static("scalar_pair", &kpg::QuadraticGame::scalar_pair, py::arg("c"));

  m.def(
      "train",
      [](const kpg::DifferentiableGame& game, const kpg::Vector& theta0,
         double eta, int K, int steps, const std::string& optimizer,
         std::optional<kpg::Vector> reference) {
        kpg::Optimizer o(optimizer_config(optimizer), game.layout());
        kpg::TrainOptions options;
        options.reference = reference ? reference : game.known_equilibrium();
        const kpg::TrainResult r =
            kpg::train(game, joint(game, theta0),
                       kpg::LearningRates::uniform(game.num_agents(), eta), K,
                       steps, o, options);
        return py::make_tuple(r.theta.flat(), rows_to_list(r.trace));
      },
      py::arg("game"), py::arg("theta0"), py::arg("eta"), py::arg("K"),
      py::arg("steps"), py::arg("optimizer") = "plain",
      py::arg("reference") = py::none());

  m.def(
      "kpg_levels",
      [](const kpg::DifferentiableGame& game, const kpg::Vector& theta,
         double eta, int K) {
        kpg::Optimizer o({}, game.layout());
        kpg::TraceOptions options;
        options.record_params = true;
        const kpg::UpdateResult r =
            kpg::kpg_update(game, joint(game, theta),
                            kpg::LearningRates::uniform(game.num_agents(), eta),
                            K, o, options);
        std::vector<kpg::Vector> levels;
        for (const kpg::ParamRow& p : r.trace.params) levels.push_back(p.theta);
        return levels;
      },
      py::arg("game"), py::arg("theta"), py::arg("eta"), py::arg("K"));

  m.def(
      "gsppm_solve",
      [](const kpg::DifferentiableGame& game, const kpg::Vector& theta,
         double eta, double tol, int max_levels) {
        const kpg::GsppmResult r = kpg::gsppm_solve(
            game, joint(game, theta),
            kpg::LearningRates::uniform(game.num_agents(), eta), tol, max_levels);
        return py::make_tuple(r.theta.flat(), r.converged, r.levels_used);
      },
      py::arg("game"), py::arg("theta"), py::arg("eta"), py::arg("tol") = 1e-12,
      py::arg("max_levels") = 1000);

  m.def(
      "estimate_constants",
      [](const kpg::DifferentiableGame& game, int samples, std::uint64_t seed) {
        const kpg::GameConstants c =
            kpg::estimate_constants(game, std::nullopt, samples, seed);
        py::dict d;
        d["L"] = c.L;
        d["lipschitz"] = c.lipschitz;
        d["grad_max"] = c.grad_max;
        return d;
      },
      py::arg("game"), py::arg("samples") = 10000, py::arg("seed") = 0);

  m.def("theorem1_bound", &kpg::theorem1_bound, py::arg("k"), py::arg("eta"),
        py::arg("L"), py::arg("n"), py::arg("grad_max"));

  m.def(
      "gsppm_ratio",
      [](const kpg::DifferentiableGame& game, const kpg::Vector& theta_star,
         double eta) {
        return kpg::gsppm_ratio(kpg::assemble_blocks(
            game, theta_star, kpg::LearningRates::uniform(game.num_agents(), eta)));
      },
      py::arg("game"), py::arg("theta_star"), py::arg("eta"));

  m.def(
      "verify",
      [](int theorem, const kpg::DifferentiableGame& game, double eta,
         std::optional<kpg::Vector> theta_star, int starts, std::uint64_t seed) {
        const kpg::LearningRates rates =
            kpg::LearningRates::uniform(game.num_agents(), eta);
        if (theorem == 1) {
          kpg::Theorem1Options o;
          o.starts = starts;
          o.seed = seed;
          return report_to_dict(kpg::verify_theorem1(game, rates, o));
        }
        if (!theta_star) theta_star = game.known_equilibrium();
        if (!theta_star) throw kpg::InputError("theta_star is required");
        if (theorem == 2) {
          kpg::Theorem2Options o;
          o.starts = starts;
          o.seed = seed;
          return report_to_dict(kpg::verify_theorem2(game, *theta_star, rates, o));
        }
        if (theorem == 3) {
          kpg::Theorem3Options o;
          o.starts = starts;
          o.seed = seed;
          return report_to_dict(kpg::verify_theorem3(game, *theta_star, rates, o));
        }
        throw kpg::InputError("theorem must be 1, 2 or 3");
      },
      py::arg("theorem"), py::arg("game"), py::arg("eta"),
      py::arg("theta_star") = py::none(), py::arg("starts") = 100,
      py::arg("seed") = 0);

  py::class_<kpg::TabularMarkovGame>(m, "TabularMarkovGame")
      .def(py::init<int, std::vector<int>, std::vector<kpg::Matrix>,
                    std::vector<kpg::Matrix>, double, kpg::Vector>(),
           py::arg("num_states"), py::arg("action_counts"), py::arg("transition"),
           py::arg("reward"), py::arg("gamma"), py::arg("iota"))
      .def_property_readonly("num_states", &kpg::TabularMarkovGame::num_states)
      .def_property_readonly("num_agents", &kpg::TabularMarkovGame::num_agents)
      .def_property_readonly("num_joint_actions",
                             &kpg::TabularMarkovGame::num_joint_actions);

  m.def("cooperative_matrix_game", &kpg::cooperative_matrix_game,
        py::arg("payoff"));
  m.def("uniform_logits", &kpg::uniform_logits, py::arg("game"));

  m.def(
      "policy_returns",
      [](const kpg::TabularMarkovGame& game, const kpg::JointLogits& logits) {
        return kpg::exact_policy_eval(game, logits).returns;
      },
      py::arg("game"), py::arg("logits"));

  m.def(
      "kmappo_gradient",
      [](const kpg::TabularMarkovGame& game, const kpg::JointLogits& logits0,
         int agent, const kpg::Matrix& logits_i, const kpg::JointLogits& others_k,
         double eps_clip, const std::string& mode) {
        return kpg::kmappo_gradient(game, logits0, agent, logits_i, others_k,
                                    eps_clip,
                                    kpg::surrogate_mode_from_string(mode));
      },
      py::arg("game"), py::arg("logits0"), py::arg("agent"), py::arg("logits_i"),
      py::arg("others_k"), py::arg("eps_clip") = 0.2,
      py::arg("mode") = "standard");

  m.def(
      "train_tabular",
      [](const kpg::TabularMarkovGame& game, int K, double eta, int steps,
         double eps_clip, std::uint64_t seed) {
        kpg::TabularTrainOptions o;
        o.eps_clip = eps_clip;
        o.seed = seed;
        const kpg::TabularTrainResult r = kpg::kpg_tabular_train(
            game, K, kpg::LearningRates::uniform(game.num_agents(), eta), steps, o);
        return py::make_tuple(r.logits, r.joint_returns);
      },
      py::arg("game"), py::arg("K"), py::arg("eta"), py::arg("steps"),
      py::arg("eps_clip") = 0.2, py::arg("seed") = 0);

  m.def(
      "run_config",
      [](const std::string& path, std::optional<std::string> out) {
        const kpg::ExperimentConfig c = kpg::load_config(path);
        const kpg::RunFiles files =
            kpg::write_run(kpg::run_experiment(c), kpg::output_stem(c, out));
        return files.trace;
      },
      py::arg("path"), py::arg("out") = py::none());

  m.def(
      "verify_config",
      [](int theorem, const std::string& path) {
        return kpg::summary_line(kpg::run_verify(theorem, kpg::load_config(path)));
      },
      py::arg("theorem"), py::arg("path"));
}
