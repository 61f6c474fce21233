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

#include "kpg/engine.h"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kpg/errors.h"
#include "kpg/meetup.h"
#include "kpg/quadratic.h"
#include "kpg/theory.h"

namespace kpg {
namespace {

JointParams pair(double a, double b) {
  Vector v(2);
  v << a, b;
  return JointParams(Layout({1, 1}), v);
}

TEST_CASE("learning rates are validated") {
  CHECK_THROWS_AS(LearningRates({}), InputError);
  CHECK_THROWS_AS(LearningRates({0.1, 0.0}), InputError);
  CHECK_THROWS_AS(LearningRates::uniform(0, 0.1), InputError);
  CHECK(LearningRates({0.1, 0.3}).max() == 0.3);
}

TEST_CASE("one level is a plain gradient step") {
  const QuadraticGame game = QuadraticGame::scalar_pair(0.5);
  Optimizer opt({}, game.layout());
  const JointParams t = pair(0.4, -1.3);
  const UpdateResult r =
      kpg_update(game, t, LearningRates::uniform(2, 0.2), 1, opt);
  for (int i = 0; i < 2; ++i) {
    const double expected = t.flat()[i] + 0.2 * game.gradient(i, t.flat())[0];
    CHECK(r.theta.flat()[i] == expected);
  }
}

TEST_CASE("a stationary point is fixed at every level") {
  const QuadraticGame game = QuadraticGame::scalar_pair(0.5);
  Optimizer opt({}, game.layout());
  const UpdateResult r =
      kpg_update(game, pair(0.0, 0.0), LearningRates::uniform(2, 0.1), 6, opt);
  CHECK(r.theta.flat().isZero());
}

TEST_CASE("levels are re-anchored at the start of the update") {
  // Frozen from tests/oracles/derive.py.
  const double expected[] = {0.95, 0.9475, 0.947375};
  const QuadraticGame game = QuadraticGame::scalar_pair(0.5);
  TraceOptions options;
  options.record_params = true;
  options.reference = Vector::Zero(2);
  Optimizer opt({}, game.layout());
  const UpdateResult r = kpg_update(game, pair(1.0, 1.0),
                                    LearningRates::uniform(2, 0.1), 3, opt,
                                    options);
  REQUIRE(r.trace.params.size() == 4);
  for (int k = 1; k <= 3; ++k) {
    CHECK(r.trace.params[k].theta[0] ==
          doctest::Approx(expected[k - 1]).epsilon(1e-15));
    CHECK(r.trace.params[k].theta[1] ==
          doctest::Approx(expected[k - 1]).epsilon(1e-15));
  }
  REQUIRE(r.trace.rows.size() == 4);
  CHECK_FALSE(r.trace.rows[0].step_dist.has_value());
  CHECK(*r.trace.rows[1].step_dist ==
        doctest::Approx(std::sqrt(2.0) * 0.05).epsilon(1e-12));
  CHECK(*r.trace.rows[3].dist_star ==
        doctest::Approx(std::sqrt(2.0) * 0.947375).epsilon(1e-12));
}

TEST_CASE("only the final level advances the optimizer") {
  const QuadraticGame game = QuadraticGame::scalar_pair(0.5);
  OptimizerConfig c;
  c.kind = OptimizerKind::kMomentum;
  Optimizer opt(c, game.layout());
  kpg_update(game, pair(1.0, 1.0), LearningRates::uniform(2, 0.1), 3, opt);
  const auto state = opt.snapshot();
  CHECK(state.accumulators[0][0] == doctest::Approx(-1.0 + 0.5 * 0.9475));
  CHECK(state.accumulators[1][0] == doctest::Approx(-1.0 + 0.5 * 0.9475));
}

TEST_CASE("training is bitwise reproducible") {
  const MeetupGame game;
  OptimizerConfig c;
  c.kind = OptimizerKind::kRmsProp;
  TrainOptions options;
  options.reference = game.known_equilibrium();
  options.record_params = true;
  auto run = [&] {
    Optimizer opt(c, game.layout());
    return train(game, pair(0.0, std::numbers::pi),
                 LearningRates::uniform(2, 0.05), 3, 40, opt, options);
  };
  const TrainResult a = run();
  const TrainResult b = run();
  CHECK(a.theta.flat() == b.theta.flat());
  REQUIRE(a.trace.rows.size() == b.trace.rows.size());
  for (std::size_t i = 0; i < a.trace.rows.size(); ++i) {
    CHECK(a.trace.rows[i].step_dist == b.trace.rows[i].step_dist);
    CHECK(a.trace.rows[i].ret == b.trace.rows[i].ret);
  }
}

TEST_CASE("gsppm matches the linear fixed point") {
  const QuadraticGame game = QuadraticGame::scalar_pair(0.5);
  const LearningRates rates = LearningRates::uniform(2, 0.1);
  const GsppmResult r = gsppm_solve(game, pair(1.0, -0.5), rates, 1e-14, 1000);
  CHECK(r.converged);
  // Frozen from tests/oracles/derive.py.
  CHECK(std::abs(r.theta.flat()[0] - 0.8796992481203008) < 1e-8);
  CHECK(std::abs(r.theta.flat()[1] + 0.40601503759398494) < 1e-8);
  Matrix lhs(2, 2);
  lhs << 1.0, -0.05, -0.05, 1.0;
  Vector rhs(2);
  rhs << 0.9, -0.45;
  const Vector x = lhs.lu().solve(rhs);
  CHECK((r.theta.flat() - x).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK(gsppm_residual(game, pair(1.0, -0.5).flat(), r.theta.flat(), rates) <
        1e-12);
}

TEST_CASE("gsppm stops at the second level for decoupled agents") {
  const QuadraticGame game = QuadraticGame::scalar_pair(0.0);
  const GsppmResult r = gsppm_solve(game, pair(1.0, 2.0),
                                    LearningRates::uniform(2, 0.1), 1e-12, 50);
  CHECK(r.converged);
  CHECK(r.levels_used == 2);
}

TEST_CASE("gsppm reports non-convergence") {
  const QuadraticGame game = QuadraticGame::scalar_pair(0.5);
  const GsppmResult r = gsppm_solve(game, pair(1.0, 1.0),
                                    LearningRates::uniform(2, 2.5), 1e-12, 30);
  CHECK_FALSE(r.converged);
  CHECK(r.levels_used == 30);
  CHECK_THROWS_AS(gsppm_solve(game, pair(1.0, 1.0),
                              LearningRates::uniform(2, 0.1), 0.0, 5),
                  InputError);
}

TEST_CASE("meetup level steps contract at rate eta L") {
  const MeetupGame game;
  const double eta = 0.3;
  const GameConstants constants = estimate_constants(game, std::nullopt, 10000, 0);
  Optimizer opt({}, game.layout());
  const UpdateResult r =
      kpg_update(game, pair(0.2, std::numbers::pi + 0.2),
                 LearningRates::uniform(2, eta), 8, opt);
  for (std::size_t k = 2; k < r.trace.rows.size(); ++k) {
    const double prev = *r.trace.rows[k - 1].step_dist;
    const double cur = *r.trace.rows[k].step_dist;
    if (prev < 1e-13) continue;
    CHECK(cur / prev <= eta * constants.L + 0.05);
  }
}

TEST_CASE("train rejects bad arguments") {
  const QuadraticGame game = QuadraticGame::scalar_pair(0.5);
  Optimizer opt({}, game.layout());
  const LearningRates rates = LearningRates::uniform(2, 0.1);
  CHECK_THROWS_AS(train(game, pair(1.0, 1.0), rates, 2, 0, opt), InputError);
  CHECK_THROWS_AS(train(game, pair(1.0, 1.0), rates, 0, 5, opt), InputError);
  CHECK_THROWS_AS(train(game, pair(1e6, 1.0), rates, 2, 5, opt), InputError);
  CHECK_THROWS_AS(kpg_update(game, pair(1.0, 1.0), LearningRates::uniform(3, 0.1),
                             1, opt),
                  InputError);
}

TEST_CASE("numeric errors carry the update index") {
  const FunctionGame game(
      Layout({1, 1}), [](int, const Vector& t) { return t.sum(); },
      [](int, const Vector& t) {
        return Vector::Constant(1, t[0] > 1.25 ? NAN : 1.0);
      });
  Optimizer opt({}, game.layout());
  try {
    train(game, pair(1.0, 0.0), LearningRates::uniform(2, 0.1), 2, 10, opt);
    FAIL("expected a numeric error");
  } catch (const NumericError& e) {
    const std::string what = e.what();
    // Update 2 starts at theta_0 = 1.2; agent 1 sees 1.3 at level 2.
    CHECK(what == "non-finite gradient [update=2 k=2 agent=1 coordinate=0]");
  }
}

TEST_CASE("deeper reasoning reaches the optimum no later") {
  const QuadraticGame game = QuadraticGame::scalar_pair(0.5);
  const LearningRates rates = LearningRates::uniform(2, 0.1);
  const auto k1 = first_passage(game, pair(1.0, 1.0), rates, 1, 2000, {},
                                Vector::Zero(2), 1e-3);
  const auto k3 = first_passage(game, pair(1.0, 1.0), rates, 3, 2000, {},
                                Vector::Zero(2), 1e-3);
  REQUIRE(k1.has_value());
  REQUIRE(k3.has_value());
  CHECK(*k3 <= *k1);
  CHECK(first_passage(game, pair(0.0, 0.0), rates, 1, 10, {}, Vector::Zero(2),
                      1e-3) == 0);
}

}  // namespace
}  // namespace kpg
