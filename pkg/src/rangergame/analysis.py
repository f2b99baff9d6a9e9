"""Post-hoc analytics over game logs: stickiness, level clustering, distances."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning

from .agents import level2_distribution
from .game import POACHER, RhinoDistribution

STICKY_THRESHOLD = 0.9  # max frequency at/above this marks a stuck-on-one-site player

LEVEL0 = "level-0"
LEVEL1 = "level-1"
LEVEL2 = "level-2"


@dataclass
class StickinessTable:
    """P(same site at t+1 | own utility u at t), pooled over consecutive-round
    pairs. Conditioning utilities with no observed pairs are absent, not 0."""

    probs: dict[int, float]
    pair_counts: dict[int, int]


def stickiness(logs: Iterable, player: str) -> StickinessTable:
    sticky = {-1: 0, 0: 0, 1: 0}
    totals = {-1: 0, 0: 0, 1: 0}
    for log in logs:
        outcomes = log.outcomes
        if len(outcomes) < 2:
            raise ValueError("stickiness needs logs with at least 2 rounds")
        for prev, cur in zip(outcomes, outcomes[1:]):
            if player == POACHER:
                u, same = prev.poacher_utility, cur.poacher_site == prev.poacher_site
            else:
                u, same = prev.ranger_utility, cur.ranger_site == prev.ranger_site
            totals[u] += 1
            sticky[u] += same
    probs = {u: sticky[u] / totals[u] for u in totals if totals[u] > 0}
    counts = {u: totals[u] for u in totals if totals[u] > 0}
    return StickinessTable(probs, counts)


def visit_frequencies(log, player: str, start: int = 0) -> tuple[float, ...]:
    outcomes = log.outcomes[start:]
    if not outcomes:
        raise ValueError("no rounds in the requested window")
    n = len(outcomes[0].rhino_present)
    counts = [0] * n
    for o in outcomes:
        counts[o.poacher_site if player == POACHER else o.ranger_site] += 1
    return tuple(c / len(outcomes) for c in counts)


def last25_frequency(log, player: str) -> tuple[float, ...]:
    """Visit frequencies over the final 25 rounds (the post-learning window)."""
    if log.rounds < 25:
        raise ValueError(f"need a horizon of at least 25 rounds, got {log.rounds}")
    return visit_frequencies(log, player, start=log.rounds - 25)


def strategy_distance(f: Sequence[float], g: Sequence[float]) -> float:
    """L1 distance between two distributions over sites."""
    if len(f) != len(g):
        raise ValueError(f"length mismatch: {len(f)} vs {len(g)}")
    return float(sum(abs(a - b) for a, b in zip(f, g)))


def canonical_strategies(d: RhinoDistribution) -> dict[str, tuple[float, ...]]:
    """The three reference behaviors players get labeled by: uniform play,
    probability matching, and utility matching against a probability-matching
    opponent."""
    return {
        LEVEL0: tuple(1.0 / d.n for _ in range(d.n)),
        LEVEL1: d.normalized(),
        LEVEL2: level2_distribution(d),
    }


@dataclass
class LevelAssignment:
    cluster_id: int  # -1 for rule-detected stuck-on-one-site players
    label: str
    frequencies: tuple[float, ...]


def cluster_levels(frequency_vectors: Sequence[Sequence[float]], d: RhinoDistribution,
                   k: int = 3, seed: int = 0) -> list[LevelAssignment]:
    """k-means over last-25 frequency vectors, with centroids labeled by the
    nearest canonical strategy. Players stuck on one site (max frequency >=
    0.9) are pre-assigned level-0 so they cannot fragment the clusters."""
    vectors = [tuple(float(x) for x in v) for v in frequency_vectors]
    if len(vectors) < k:
        raise ValueError(f"need at least k={k} vectors, got {len(vectors)}")
    canon = canonical_strategies(d)

    assignments: list[LevelAssignment | None] = [None] * len(vectors)
    free: list[int] = []
    for idx, vec in enumerate(vectors):
        if max(vec) >= STICKY_THRESHOLD:
            assignments[idx] = LevelAssignment(-1, LEVEL0, vec)
        else:
            free.append(idx)

    if free:
        data = np.asarray([vectors[i] for i in free])
        k_eff = min(k, len(free), len({tuple(row) for row in data.round(12)}))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            km = KMeans(n_clusters=k_eff, n_init=20, random_state=seed).fit(data)
        labels = {}
        for cid, center in enumerate(km.cluster_centers_):
            labels[cid] = min(canon, key=lambda name: strategy_distance(center, canon[name]))
        for row, idx in enumerate(free):
            cid = int(km.labels_[row])
            assignments[idx] = LevelAssignment(cid, labels[cid], vectors[idx])

    return [a for a in assignments if a is not None]
