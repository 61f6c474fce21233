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

"""Independent numpy oracles for the frozen expected values in the C++ tests.

Run:  python3 tests/oracles/derive.py
Every value printed here is pasted, unchanged, into the unit tests.
"""

import json
import math

import numpy as np


def quadratic_levels(theta, eta, c, levels):
    """Brute-force level loop for J_i = -x_i^2/2 + c x_i x_j."""
    theta = np.asarray(theta, dtype=float)
    prev = theta.copy()
    out = []
    for _ in range(levels):
        nxt = theta.copy()
        for i in range(2):
            j = 1 - i
            nxt[i] = theta[i] + eta * (-theta[i] + c * prev[j])
        prev = nxt
        out.append(nxt.tolist())
    return out


def quadratic_fixed_point(theta, eta, c):
    a = -np.eye(2)
    bd = c * np.array([[0.0, 1.0], [1.0, 0.0]])
    lhs = np.eye(2) - eta * bd
    rhs = (np.eye(2) + eta * a) @ np.asarray(theta, dtype=float)
    return np.linalg.solve(lhs, rhs).tolist()


def ratio(eta, c):
    a = -np.eye(2)
    bd = c * np.array([[0.0, 1.0], [1.0, 0.0]])
    s_plus = np.linalg.svd(np.eye(2) + eta * a, compute_uv=False)
    s_minus = np.linalg.svd(np.eye(2) - eta * bd, compute_uv=False)
    return float(s_plus.max() ** 2 / s_minus.min() ** 2)


def meetup_objective(t1, t2, i1=(0.0, 0.0), i2=(3.0, 2.0)):
    i1, i2 = np.asarray(i1), np.asarray(i2)
    h1 = np.array([math.cos(t1), math.sin(t1)])
    h2 = np.array([math.cos(t2), math.sin(t2)])
    d1 = i2 + h2 - i1
    d2 = i1 + h1 - i2
    return (float(h1 @ d1 / np.linalg.norm(d1) - 1.0),
            float(h2 @ d2 / np.linalg.norm(d2) - 1.0))


def meetup_gradient_fd(t1, t2, h=1e-6):
    """Richardson-extrapolated central differences of the objective."""
    def d(f, x, h):
        return (f(x + h) - f(x - h)) / (2 * h)
    g1 = lambda x: meetup_objective(x, t2)[0]
    g2 = lambda x: meetup_objective(t1, x)[1]
    out = []
    for f, x in ((g1, t1), (g2, t2)):
        out.append((4 * d(f, x, h / 2) - d(f, x, h)) / 3)
    return out


def meetup_blocks():
    """Second derivatives at the optimum by nested differences of J."""
    star = (math.atan2(2, 3), math.atan2(2, 3) - math.pi)
    h = 1e-4

    def j(i, t):
        return meetup_objective(t[0], t[1])[i]

    blocks = []
    for i in range(2):
        o = 1 - i
        t = list(star)
        e_i = [0.0, 0.0]
        e_i[i] = h
        e_o = [0.0, 0.0]
        e_o[o] = h
        add = lambda a, b, s=1.0: [a[0] + s * b[0], a[1] + s * b[1]]
        a_ii = (j(i, add(t, e_i)) - 2 * j(i, t) + j(i, add(t, e_i, -1))) / h**2
        b_io = (j(i, add(add(t, e_i), e_o)) - j(i, add(add(t, e_i), e_o, -1))
                - j(i, add(add(t, e_i, -1), e_o))
                + j(i, add(add(t, e_i, -1), e_o, -1))) / (4 * h * h)
        blocks.append((a_ii, b_io))
    return star, blocks


def matrix_game():
    r = np.array([[4.0, 0.0], [0.0, 2.0]])
    p1 = np.array([0.5, 0.5])
    p2 = np.array([0.5, 0.5])
    v = float(p1 @ r @ p2)
    q1 = r @ p2  # marginal over agent 2
    adv1_marginal = (q1 - v).tolist()
    # dJ/dlogit_1(b) = pi_1(b) (q1(b) - v)
    grad1 = (p1 * (q1 - v)).tolist()
    return v, adv1_marginal, grad1


def markov_game():
    """Two-state, two-agent, two-action game; exact V by a linear solve."""
    rng = np.random.default_rng(7)
    s, a1, a2 = 2, 2, 2
    joint = a1 * a2
    p = rng.random((s, joint, s))
    p /= p.sum(axis=2, keepdims=True)
    r = rng.normal(size=(2, s, joint))
    gamma = 0.9
    iota = np.array([0.3, 0.7])
    logits1 = np.array([[0.2, -0.1], [0.5, 0.0]])
    logits2 = np.array([[-0.3, 0.4], [0.1, 0.2]])

    def softmax(x):
        e = np.exp(x - x.max(axis=1, keepdims=True))
        return e / e.sum(axis=1, keepdims=True)

    pi1, pi2 = softmax(logits1), softmax(logits2)
    pij = np.einsum("sa,sb->sab", pi1, pi2).reshape(s, joint)
    p_pi = np.einsum("sa,sat->st", pij, p)
    vs = []
    for i in range(2):
        r_pi = (pij * r[i]).sum(axis=1)
        vs.append(np.linalg.solve(np.eye(s) - gamma * p_pi, r_pi))
    occ = (1 - gamma) * np.linalg.solve((np.eye(s) - gamma * p_pi).T, iota)
    return {
        "transition": p.tolist(),
        "reward": r.tolist(),
        "V": [v.tolist() for v in vs],
        "occupancy": occ.tolist(),
        "returns": [float(iota @ v) for v in vs],
    }


def theorem1(k, eta, L, n, gmax):
    return eta * (eta * L) ** (k - 1) * n * (n - 1) ** (k - 1) * gmax


def main():
    out = {}
    out["quadratic_levels_theta11"] = quadratic_levels([1, 1], 0.1, 0.5, 3)
    out["quadratic_fixed_point_1_m05"] = quadratic_fixed_point([1, -0.5], 0.1, 0.5)
    out["ratio_eta01_c05"] = ratio(0.1, 0.5)
    out["ratio_closed_form"] = (0.9 / 0.95) ** 2
    out["svd_I_minus_005_swap"] = np.linalg.svd(
        np.eye(2) - 0.05 * np.array([[0, 1], [1, 0]]), compute_uv=False).tolist()
    out["meetup_objective_0_pi"] = meetup_objective(0.0, math.pi)
    out["meetup_gradient_03_m2"] = meetup_gradient_fd(0.3, -2.0)
    star, blocks = meetup_blocks()
    out["meetup_star"] = star
    out["meetup_blocks_at_star"] = blocks
    out["meetup_cross_closed_form"] = -1.0 / (math.sqrt(13.0) - 1.0)
    v, adv, grad = matrix_game()
    out["matrix_value"] = v
    out["matrix_adv1_marginal"] = adv
    out["matrix_grad1_uniform"] = grad
    out["kmaddpg_quadratic_agent0"] = -1 + 0.5 * 0.95
    out["theorem1_k3"] = theorem1(3, 0.1, 0.5, 2, 7.5)
    out["markov_game"] = markov_game()
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
