"""Exact Nash equilibrium of the stage game, plus an independent LP oracle.

The game has a unique NE. On its support S the indifference conditions pin
both strategies in closed form:

    r_i = (d_i - v) / (1 + d_i)          (poacher indifferent on S)
    p_i proportional to 1 / (1 + d_i)    (ranger indifferent on S)

and the value v solves sum_{i in S} (d_i - v) / (1 + d_i) = 1. The support is
found by water-filling: sort sites by d_i descending and grow the prefix until
every included site has d_i above the implied v and every excluded site is at
or below it. Ties in d_i are broken by site index, which cannot change the
result but makes the procedure deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .game import RhinoDistribution, check_strategy, payoff_matrix

# Included sites need d_i >= v and excluded ones d_i <= v; the epsilon keeps
# the check stable when a site sits exactly on the waterline.
_SUPPORT_EPS = 1e-12

BR_ATOL = 1e-9


@dataclass(frozen=True)
class EquilibriumResult:
    poacher_strategy: tuple[float, ...]
    ranger_strategy: tuple[float, ...]
    value: float
    support: frozenset[int]
    method: str = "closed_form"

    def to_dict(self) -> dict:
        return {
            "poacher_strategy": list(self.poacher_strategy),
            "ranger_strategy": list(self.ranger_strategy),
            "value": self.value,
            "support": sorted(self.support),
            "method": self.method,
        }


def solve_stage_ne(d: RhinoDistribution) -> EquilibriumResult:
    """Unique stage-game NE by water-filling over the sorted distribution."""
    n = d.n
    probs = d.probs
    order = sorted(range(n), key=lambda i: (-probs[i], i))
    a = [probs[i] / (1.0 + probs[i]) for i in order]
    b = [1.0 / (1.0 + probs[i]) for i in order]

    def scan(strict: bool):
        a_sum = b_sum = 0.0
        for k in range(1, n + 1):
            a_sum += a[k - 1]
            b_sum += b[k - 1]
            v = (a_sum - 1.0) / b_sum
            lowest_in = probs[order[k - 1]]
            highest_out = probs[order[k]] if k < n else None
            margin = _SUPPORT_EPS if strict else -_SUPPORT_EPS
            if lowest_in > v + margin and (highest_out is None or highest_out <= v - margin):
                return k, v, b_sum
        return None

    # At most one prefix passes the strict test; a site sitting exactly on the
    # waterline (d_i == v, where the NE degenerates to a continuum of poacher
    # strategies) only passes the relaxed scan, which excludes it, matching
    # the strict construction's r_i = 0, p_i = 0 choice.
    chosen = scan(strict=True) or scan(strict=False)
    if chosen is None:  # unreachable: the relaxed scan always accepts some prefix
        raise RuntimeError(f"water-filling found no support for d={probs}")

    k, value, b_total = chosen
    support = frozenset(order[:k])
    ranger = [0.0] * n
    poacher = [0.0] * n
    for i in support:
        ranger[i] = max(0.0, (probs[i] - value) / (1.0 + probs[i]))
        poacher[i] = (1.0 / (1.0 + probs[i])) / b_total
    # kill accumulated float drift so both vectors sum to exactly 1
    r_total = sum(ranger)
    p_total = sum(poacher)
    ranger = tuple(x / r_total for x in ranger)
    poacher = tuple(x / p_total for x in poacher)
    return EquilibriumResult(poacher, ranger, value, support, "closed_form")


def _maximin_lp(a: np.ndarray) -> tuple[np.ndarray, float]:
    """max_v v s.t. p^T A >= v, sum p = 1, p >= 0 for the row player of A."""
    n_rows, n_cols = a.shape
    c = np.zeros(n_rows + 1)
    c[-1] = -1.0  # maximize v
    a_ub = np.hstack([-a.T, np.ones((n_cols, 1))])
    b_ub = np.zeros(n_cols)
    a_eq = np.hstack([np.ones((1, n_rows)), np.zeros((1, 1))])
    b_eq = np.ones(1)
    bounds = [(0.0, 1.0)] * n_rows + [(None, None)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
                  bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"maximin LP failed: {res.message}")
    strat = np.clip(res.x[:-1], 0.0, None)
    return strat / strat.sum(), float(res.x[-1])


def maximin_oracle(d: RhinoDistribution) -> EquilibriumResult:
    """Solve the same game by a generic route: one exact LP per player
    (HiGHS). Used to cross-check the closed form; intended for small n."""
    a = payoff_matrix(d)
    poacher, v_p = _maximin_lp(a)
    ranger, v_r = _maximin_lp(-a.T)  # ranger maximizes her own payoff -A^T
    if abs(v_p + v_r) > 1e-7:
        raise RuntimeError(f"LP values disagree: poacher {v_p}, ranger {-v_r}")
    support = frozenset(
        i for i in range(d.n) if poacher[i] > 1e-9 or ranger[i] > 1e-9
    )
    return EquilibriumResult(tuple(poacher), tuple(ranger), v_p, support,
                             "linear_program")


def poacher_utilities(estimate: Sequence[float], d: RhinoDistribution) -> list[float]:
    """Per-site expected poacher points against a ranger estimate (unvalidated
    fast path for agents; d_i - (1 + d_i) * r_i)."""
    probs = d.probs
    return [probs[i] - (1.0 + probs[i]) * estimate[i] for i in range(len(probs))]


def ranger_utilities(estimate: Sequence[float], d: RhinoDistribution) -> list[float]:
    """Per-site expected ranger points against a poacher estimate:
    (1 + d_i) * p_i - sum_j d_j p_j."""
    probs = d.probs
    t = 0.0
    for dj, pj in zip(probs, estimate):
        t += dj * pj
    return [(1.0 + probs[i]) * estimate[i] - t for i in range(len(probs))]


def _argmax_set(utils: Sequence[float]) -> list[int]:
    best = max(utils)
    eps = BR_ATOL * max(1.0, abs(best))
    return [i for i, u in enumerate(utils) if u >= best - eps]


def best_response_poacher(estimate: Sequence[float], d: RhinoDistribution) -> list[int]:
    """All sites maximizing the poacher's expected points against `estimate`."""
    est = check_strategy(estimate, d.n)
    return _argmax_set(poacher_utilities(est, d))


def best_response_ranger(estimate: Sequence[float], d: RhinoDistribution) -> list[int]:
    """All sites maximizing the ranger's expected points against `estimate`."""
    est = check_strategy(estimate, d.n)
    return _argmax_set(ranger_utilities(est, d))
