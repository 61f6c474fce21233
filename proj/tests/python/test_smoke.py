# Copyright 2026 The KPG Lab Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
import pathlib

import numpy as np
import pytest

import kpg_lab

CONFIGS = pathlib.Path(__file__).resolve().parents[1] / "configs"


def test_quadratic_levels():
    game = kpg_lab.QuadraticGame.scalar_pair(0.5)
    levels = kpg_lab.kpg_levels(game, np.array([1.0, 1.0]), 0.1, 3)
    assert [round(x[0], 12) for x in levels] == [1.0, 0.95, 0.9475, 0.947375]


def test_gsppm_matches_linear_solve():
    game = kpg_lab.QuadraticGame.scalar_pair(0.5)
    theta, converged, _ = kpg_lab.gsppm_solve(game, np.array([1.0, -0.5]), 0.1, 1e-14)
    lhs = np.eye(2) - 0.05 * np.array([[0.0, 1.0], [1.0, 0.0]])
    expected = np.linalg.solve(lhs, 0.9 * np.array([1.0, -0.5]))
    assert converged
    np.testing.assert_allclose(theta, expected, atol=1e-8)
    ratio = kpg_lab.gsppm_ratio(game, np.zeros(2), 0.1)
    assert ratio == pytest.approx((0.9 / 0.95) ** 2, abs=1e-12)


def test_meetup_training_reaches_the_optimum():
    game = kpg_lab.MeetupGame()
    star = game.known_equilibrium()
    theta, rows = kpg_lab.train(game, np.array([0.0, math.pi]), 0.1, 4, 300, "momentum")
    assert game.distance(theta, star) < 1e-2
    assert set(rows[0]) == {"update", "k", "agent", "step_dist", "dist_star",
                            "bound_t1", "return"}


def test_verify_suites():
    game = kpg_lab.QuadraticGame.scalar_pair(0.5)
    report = kpg_lab.verify(2, game, 0.1, starts=5)
    assert report["status"] == "PASS"
    assert report["metrics"]["ratio"] == pytest.approx(0.8975069252077562)
    assert kpg_lab.verify(1, game, 2.5, starts=5)["status"] == "SKIPPED"


def test_tabular_matrix_game():
    game = kpg_lab.cooperative_matrix_game(np.array([[4.0, 0.0], [0.0, 2.0]]))
    logits = kpg_lab.uniform_logits(game)
    assert kpg_lab.policy_returns(game, logits) == pytest.approx([1.5, 1.5])
    grad = kpg_lab.kmappo_gradient(game, logits, 0, logits[0], logits)
    np.testing.assert_allclose(grad, [[0.25, -0.25]], atol=1e-14)
    _, returns = kpg_lab.train_tabular(game, 2, 0.5, 200)
    assert returns[-1] >= 3.95


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(kpg_lab.InputError, match="missing required key 'K'"):
        kpg_lab.run_config(str(CONFIGS / "missing_k.json"))
    with pytest.raises(ValueError):
        kpg_lab.MeetupGame([1.0, 1.0], [1.0, 1.0])
    trace = kpg_lab.run_config(str(CONFIGS / "quadratic.json"), str(tmp_path / "q"))
    assert pathlib.Path(trace).read_text().startswith(
        "update,k,agent,step_dist,dist_star,bound_t1,return\n")
    assert kpg_lab.verify_config(2, str(CONFIGS / "quadratic.json")).startswith(
        "THEOREM 2 PASS")
