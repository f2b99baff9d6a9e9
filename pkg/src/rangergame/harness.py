"""Game runner and Monte Carlo batch machinery.

Each game owns one PCG64 generator seeded from the config and consumes it in
a fixed order (poacher init, ranger init, then per round: rhino draw, poacher
action, ranger action, poacher update, ranger update), so a (config, seed)
pair replays to an identical log. Batch repetitions use derived seeds
base_seed + k and are therefore schedule-independent.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .agents import AgentSpec, make_agent
from .game import (POACHER, RANGER, RhinoDistribution, RoundOutcome,
                   resolve_round, sample_rhinos)

LAST_WINDOW = 25  # end-of-game window used for behavioral summaries


@dataclass(frozen=True)
class GameConfig:
    distribution: RhinoDistribution
    rounds: int
    poacher: AgentSpec
    ranger: AgentSpec
    seed: int

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def to_dict(self) -> dict:
        return {
            "distribution": list(self.distribution.probs),
            "rounds": self.rounds,
            "poacher": self.poacher.to_dict(),
            "ranger": self.ranger.to_dict(),
            "seed": self.seed,
        }

    def digest(self) -> str:
        return digest_config(self.to_dict())


def digest_config(config_dict: dict) -> str:
    payload = json.dumps(config_dict, sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:12]


@dataclass
class GameLog:
    config: GameConfig
    outcomes: list[RoundOutcome]
    poacher_estimates: list[tuple[float, ...] | None] | None = None

    @property
    def distribution(self) -> RhinoDistribution:
        return self.config.distribution

    @property
    def rounds(self) -> int:
        return len(self.outcomes)

    def average_utility(self, player: str = POACHER) -> float:
        if player == POACHER:
            return sum(o.poacher_utility for o in self.outcomes) / len(self.outcomes)
        return sum(o.ranger_utility for o in self.outcomes) / len(self.outcomes)


def run_game(config: GameConfig, record_estimates: bool = False) -> GameLog:
    """Play one seeded game to completion."""
    d = config.distribution
    rng = np.random.default_rng(config.seed)
    poacher = make_agent(config.poacher, d, POACHER, rng)
    ranger = make_agent(config.ranger, d, RANGER, rng)
    outcomes: list[RoundOutcome] = []
    estimates: list[tuple[float, ...] | None] | None = [] if record_estimates else None
    for _ in range(config.rounds):
        rhinos = sample_rhinos(d, rng)
        p_site = poacher.act(rng)
        r_site = ranger.act(rng)
        outcome = resolve_round(p_site, r_site, rhinos)
        outcomes.append(outcome)
        poacher.observe(outcome, rng)
        ranger.observe(outcome, rng)
        if estimates is not None:
            estimates.append(poacher.opponent_estimate())
    return GameLog(config, outcomes, estimates)


def _site_frequencies(outcomes, player, start=0) -> tuple[float, ...]:
    n = len(outcomes[0].rhino_present)
    counts = [0] * n
    window = outcomes[start:]
    for o in window:
        counts[o.poacher_site if player == POACHER else o.ranger_site] += 1
    return tuple(c / len(window) for c in counts)


@dataclass
class BatchStats:
    """Per-repetition average utilities plus the five-number boxplot summary
    (whiskers at the outermost points within 1.5 IQR of the quartiles) and
    mean visit frequencies."""

    rep_utilities: list[float]
    mean: float
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float
    min: float
    max: float
    poacher_frequencies: tuple[float, ...]
    ranger_frequencies: tuple[float, ...]
    poacher_last25: tuple[float, ...] | None
    ranger_last25: tuple[float, ...] | None

    @classmethod
    def aggregate(cls, rep_utilities, p_freqs, r_freqs, p_last, r_last) -> "BatchStats":
        xs = np.asarray(rep_utilities, dtype=float)
        q1, med, q3 = np.percentile(xs, [25, 50, 75])
        iqr = q3 - q1
        inside = xs[(xs >= q1 - 1.5 * iqr) & (xs <= q3 + 1.5 * iqr)]
        return cls(
            rep_utilities=list(map(float, xs)),
            mean=float(xs.mean()),
            median=float(med),
            q1=float(q1),
            q3=float(q3),
            whisker_low=float(inside.min()),
            whisker_high=float(inside.max()),
            min=float(xs.min()),
            max=float(xs.max()),
            poacher_frequencies=tuple(np.mean(p_freqs, axis=0)),
            ranger_frequencies=tuple(np.mean(r_freqs, axis=0)),
            poacher_last25=None if p_last is None else tuple(np.mean(p_last, axis=0)),
            ranger_last25=None if r_last is None else tuple(np.mean(r_last, axis=0)),
        )


def _run_rep(config_dict: dict, seed: int):
    config = config_from_dict(config_dict, seed=seed)
    log = run_game(config)
    k = config.rounds
    last = max(0, k - LAST_WINDOW)
    return (
        log.average_utility(POACHER),
        _site_frequencies(log.outcomes, POACHER),
        _site_frequencies(log.outcomes, RANGER),
        _site_frequencies(log.outcomes, POACHER, last) if k >= LAST_WINDOW else None,
        _site_frequencies(log.outcomes, RANGER, last) if k >= LAST_WINDOW else None,
    )


def config_from_dict(data: dict, seed: int | None = None) -> GameConfig:
    return GameConfig(
        distribution=RhinoDistribution(tuple(data["distribution"])),
        rounds=int(data["rounds"]),
        poacher=AgentSpec.from_dict(data["poacher"]),
        ranger=AgentSpec.from_dict(data["ranger"]),
        seed=int(data["seed"] if seed is None else seed),
    )


def run_batch(config: GameConfig, repetitions: int, base_seed: int | None = None,
              workers: int | None = None) -> BatchStats:
    """Run independent repetitions with seeds base_seed + k and aggregate."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    base = config.seed if base_seed is None else base_seed
    cfg = config.to_dict()
    seeds = [base + k for k in range(repetitions)]
    if workers and workers > 1 and repetitions > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_rep, [cfg] * repetitions, seeds,
                                 chunksize=max(1, repetitions // (4 * workers))))
    else:
        rows = [_run_rep(cfg, seed) for seed in seeds]
    utilities = [r[0] for r in rows]
    p_freqs = [r[1] for r in rows]
    r_freqs = [r[2] for r in rows]
    p_last = None if rows[0][3] is None else [r[3] for r in rows]
    r_last = None if rows[0][4] is None else [r[4] for r in rows]
    return BatchStats.aggregate(utilities, p_freqs, r_freqs, p_last, r_last)


def running_frequencies(log: GameLog, player: str, window: int | None = None) -> np.ndarray:
    """Round-by-round visit-frequency trace: row t holds the frequencies over
    the trailing `window` rounds ending at t (full prefix when window is None)."""
    if not log.outcomes:
        raise ValueError("empty game log")
    n = log.distribution.n
    sites = np.array(
        [o.poacher_site if player == POACHER else o.ranger_site for o in log.outcomes]
    )
    onehot = np.zeros((len(sites), n))
    onehot[np.arange(len(sites)), sites] = 1.0
    cum = np.cumsum(onehot, axis=0)
    t = np.arange(1, len(sites) + 1)[:, None]
    if window is None or window >= len(sites):
        return cum / t
    if window < 1:
        raise ValueError("window must be >= 1")
    trailing = cum.copy()
    trailing[window:] -= cum[:-window]
    return trailing / np.minimum(t, window)


def significance_sweep(d: RhinoDistribution, s_values, M: int, rounds: int,
                       repetitions: int, base_seed: int = 0,
                       significance: str = "poacher",
                       workers: int | None = None) -> list[tuple[int, float]]:
    """Mean poacher utility for PFA-vs-PFA play at each significance weight.

    By default only the poacher applies the significance weight while the
    ranger stays at s=0; pass significance="both" to weight both agents.
    """
    if significance not in ("poacher", "both"):
        raise ValueError("significance must be 'poacher' or 'both'")
    out = []
    for s in s_values:
        config = GameConfig(
            distribution=d,
            rounds=rounds,
            poacher=AgentSpec(kind="pfa", M=M, s=int(s)),
            ranger=AgentSpec(kind="pfa", M=M, s=int(s) if significance == "both" else 0),
            seed=base_seed,
        )
        stats = run_batch(config, repetitions, base_seed=base_seed, workers=workers)
        out.append((int(s), stats.mean))
    return out
