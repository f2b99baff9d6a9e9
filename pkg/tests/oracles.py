"""Independent oracles used to freeze expected values in the tests.

These deliberately avoid the package's own code paths: the transition
enumerator walks every eviction path with exact probabilities, and the
matrix-expectation helper evaluates the payoff table by brute force.
"""

from __future__ import annotations


def enumerate_transition(counts, capacity, site, utility, s):
    """Exact distribution over post-update count vectors for one bounded
    memory update (sequential proportional eviction, insert weight s+1 on a
    caught event, 1 otherwise, capped at capacity)."""
    w = s + 1 if (utility == -1 and s > 0) else 1
    w = min(w, capacity)
    evictions = max(0, sum(counts) + w - capacity)
    dist: dict[tuple, float] = {}

    def recurse(state, prob, remaining):
        if remaining == 0:
            final = list(state)
            final[site] += w
            key = tuple(final)
            dist[key] = dist.get(key, 0.0) + prob
            return
        total = sum(state)
        for i, c in enumerate(state):
            if c > 0:
                nxt = list(state)
                nxt[i] -= 1
                recurse(nxt, prob * c / total, remaining - 1)

    recurse(list(counts), 1.0, evictions)
    return dist


def matrix_expectation(poacher_strategy, ranger_strategy, d):
    """Poacher's expected points from the full payoff table: cell (i, j) pays
    -1 on the diagonal and d_i off it."""
    total = 0.0
    for i, p in enumerate(poacher_strategy):
        for j, r in enumerate(ranger_strategy):
            cell = -1.0 if i == j else d[i]
            total += p * r * cell
    return total


def l1(f, g):
    return sum(abs(a - b) for a, b in zip(f, g))
