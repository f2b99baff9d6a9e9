"""Stage-game primitives for the repeated ranger-poacher game.

The stage game is a zero-sum matrix game over n sites. Each round a rhino is
present at site i with probability d_i, independently across sites and rounds
(the d_i need not sum to 1). The poacher picks a site hoping to bag a rhino,
the ranger picks a site hoping to catch the poacher. Realized points: -1 to
the poacher if both picked the same site, +1 if the sites differ and a rhino
was at the poacher's site, 0 otherwise; the ranger's points are the negation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

POACHER = "poacher"
RANGER = "ranger"
ROLES = (POACHER, RANGER)

STRATEGY_ATOL = 1e-9


@dataclass(frozen=True)
class RhinoDistribution:
    """Per-site rhino probabilities. Defines the stage game."""

    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) < 2:
            raise ValueError(f"need at least 2 sites, got {len(probs)}")
        for i, p in enumerate(probs):
            if not (0.0 <= p <= 1.0) or not np.isfinite(p):
                raise ValueError(f"site {i} probability {p} outside [0, 1]")

    @property
    def n(self) -> int:
        return len(self.probs)

    def normalized(self) -> tuple[float, ...]:
        """The probability-matching vector d / sum(d)."""
        total = sum(self.probs)
        if total <= 0.0:
            raise ValueError("cannot probability-match an all-zero distribution")
        return tuple(p / total for p in self.probs)

    def __iter__(self):
        return iter(self.probs)

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, i):
        return self.probs[i]


def check_strategy(probs: Sequence[float], n: int | None = None) -> tuple[float, ...]:
    """Validate a mixed strategy: nonnegative entries summing to 1 (±1e-9)."""
    out = tuple(float(p) for p in probs)
    if n is not None and len(out) != n:
        raise ValueError(f"strategy has {len(out)} entries, expected {n}")
    if any(p < 0.0 for p in out):
        raise ValueError(f"strategy has negative entries: {out}")
    total = sum(out)
    if abs(total - 1.0) > STRATEGY_ATOL:
        raise ValueError(f"strategy sums to {total}, not 1")
    return out


def check_site(site: int, n: int) -> int:
    if not 0 <= site < n:
        raise IndexError(f"site {site} out of range [0, {n})")
    return site


class RoundOutcome(NamedTuple):
    """Everything both players observe at the end of one round."""

    poacher_site: int
    ranger_site: int
    rhino_present: tuple[bool, ...]
    poacher_utility: int
    ranger_utility: int


def expected_poacher_utility(site: int, ranger_strategy: Sequence[float],
                             d: RhinoDistribution) -> float:
    """Expected points for a poacher visiting `site` against a ranger mixture:
    (1 - r_i) * d_i - r_i."""
    r = check_strategy(ranger_strategy, d.n)
    check_site(site, d.n)
    return (1.0 - r[site]) * d.probs[site] - r[site]


def expected_ranger_utility(poacher_strategy: Sequence[float], site: int,
                            d: RhinoDistribution) -> float:
    """Expected points for a ranger guarding `site` against a poacher mixture:
    p_i - sum_{j != i} d_j p_j."""
    p = check_strategy(poacher_strategy, d.n)
    check_site(site, d.n)
    return p[site] - sum(d.probs[j] * p[j] for j in range(d.n) if j != site)


def payoff_matrix(d: RhinoDistribution) -> np.ndarray:
    """Poacher's expected payoff matrix A with A[i, j] = -1 if i == j else d_i."""
    n = d.n
    a = np.tile(np.asarray(d.probs)[:, None], (1, n))
    np.fill_diagonal(a, -1.0)
    return a


def sample_rhinos(d: RhinoDistribution, rng: np.random.Generator) -> tuple[bool, ...]:
    """One independent Bernoulli draw per site."""
    draws = rng.random(d.n)
    return tuple(bool(x < p) for x, p in zip(draws, d.probs))


def resolve_round(poacher_site: int, ranger_site: int,
                  rhino_present: Sequence[bool]) -> RoundOutcome:
    """Apply the payoff matrix to one pair of site choices."""
    n = len(rhino_present)
    check_site(poacher_site, n)
    check_site(ranger_site, n)
    if poacher_site == ranger_site:
        u = -1
    elif rhino_present[poacher_site]:
        u = 1
    else:
        u = 0
    return RoundOutcome(poacher_site, ranger_site, tuple(bool(b) for b in rhino_present), u, -u)


def warn_if_unprofitable(d: RhinoDistribution, value: float) -> None:
    """The experiments only use distributions where the poacher's NE value is
    positive; other inputs are legal but worth flagging."""
    if value <= 0.0:
        warnings.warn(
            f"NE value {value:.4f} <= 0: the poacher has no profitable strategy "
            f"against an equilibrium ranger for d={tuple(d.probs)}",
            stacklevel=2,
        )
