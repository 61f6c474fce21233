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

"""k-level policy gradient lab."""

from kpg_lab._core import (
    Game,
    InputError,
    MeetupGame,
    NumericError,
    QuadraticGame,
    TabularMarkovGame,
    cooperative_matrix_game,
    estimate_constants,
    gsppm_ratio,
    gsppm_solve,
    kmappo_gradient,
    kpg_levels,
    policy_returns,
    run_config,
    theorem1_bound,
    train,
    train_tabular,
    uniform_logits,
    verify,
    verify_config,
)

__all__ = [
    "Game",
    "InputError",
    "MeetupGame",
    "NumericError",
    "QuadraticGame",
    "TabularMarkovGame",
    "cooperative_matrix_game",
    "estimate_constants",
    "gsppm_ratio",
    "gsppm_solve",
    "kmappo_gradient",
    "kpg_levels",
    "policy_returns",
    "run_config",
    "theorem1_bound",
    "train",
    "train_tabular",
    "uniform_logits",
    "verify",
    "verify_config",
]
