"""Every poacher and ranger strategy, behind one Agent interface.

The centerpiece is the bounded-memory automaton: it keeps an n-vector of
counts [q_1..q_n] with sum capped at the memory size M, approximating how
often the opponent visited each site recently. When the memory is full, room
is made by decrementing sites sampled from the current normalized counts, so
the vector behaves like a randomized sliding window. A significance weight
s > 0 makes the agent insert s+1 counts (instead of 1) for the opponent's
site whenever the agent's own realized utility was -1, overweighting the
events that hurt.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import equilibrium
from .game import POACHER, ROLES, RhinoDistribution, RoundOutcome

DEFAULT_ETA = 0.1

KINDS = (
    "ne", "pm", "um", "fp", "mwu", "pfa",
    "level0-uniform", "level0-sticky", "level1", "level2",
)

_ALIASES = {
    "ne_fixed": "ne",
    "prob_match": "pm",
    "util_match": "um",
    "fictitious_play": "fp",
    "level0u": "level0-uniform",
    "level0s": "level0-sticky",
    "level0_uniform": "level0-uniform",
    "level0_sticky": "level0-sticky",
}

_POACHER_ONLY = {"level1", "level2"}


@dataclass(frozen=True)
class AgentSpec:
    """Declarative agent configuration: a kind plus its parameters."""

    kind: str
    M: int | None = None
    s: int | None = None
    eta: float | None = None

    def __post_init__(self):
        kind = _ALIASES.get(self.kind.lower(), self.kind.lower())
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise ValueError(f"unknown agent kind {self.kind!r}; valid: {KINDS}")
        if kind == "pfa":
            if self.M is None or self.M < 1:
                raise ValueError("pfa requires a memory capacity M >= 1")
            if self.s is not None and self.s < 0:
                raise ValueError("pfa significance weight s must be >= 0")
        elif self.M is not None or self.s is not None:
            raise ValueError(f"M/s only apply to pfa agents, not {kind!r}")
        if self.eta is not None:
            if kind != "mwu":
                raise ValueError(f"eta only applies to mwu agents, not {kind!r}")
            if self.eta <= 0:
                raise ValueError("mwu learning rate eta must be > 0")

    @classmethod
    def parse(cls, text: str) -> "AgentSpec":
        """Parse the CLI syntax `kind[:key=value,...]`, e.g. `pfa:M=10,s=1`."""
        kind, _, params = text.strip().partition(":")
        kwargs: dict = {}
        if params:
            for item in params.split(","):
                key, eq, value = item.partition("=")
                key = key.strip()
                if not eq or key not in ("M", "s", "eta"):
                    raise ValueError(f"bad agent parameter {item!r} in {text!r}")
                kwargs[key] = float(value) if key == "eta" else int(value)
        return cls(kind=kind, **kwargs)

    def label(self) -> str:
        parts = []
        if self.M is not None:
            parts.append(f"M={self.M}")
        if self.s is not None:
            parts.append(f"s={self.s}")
        if self.eta is not None:
            parts.append(f"eta={self.eta:g}")
        return self.kind + (":" + ",".join(parts) if parts else "")

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        for key in ("M", "s", "eta"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "AgentSpec":
        return cls(kind=data["kind"], M=data.get("M"), s=data.get("s"),
                   eta=data.get("eta"))


@dataclass
class BoundedMemory:
    """Count vector [q_1..q_n] with sum(q) <= capacity at all times."""

    counts: list[int]
    capacity: int

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("memory capacity must be >= 1")
        if any(c < 0 for c in self.counts):
            raise ValueError(f"negative count in {self.counts}")
        if sum(self.counts) > self.capacity:
            raise ValueError(f"counts {self.counts} exceed capacity {self.capacity}")

    @classmethod
    def empty(cls, n: int, capacity: int) -> "BoundedMemory":
        return cls([0] * n, capacity)

    @property
    def total(self) -> int:
        return sum(self.counts)


def memory_estimate(memory: BoundedMemory) -> tuple[float, ...]:
    """Counts normalized into an opponent-strategy estimate."""
    total = memory.total
    if total == 0:
        raise ValueError("cannot estimate from an empty memory")
    return tuple(c / total for c in memory.counts)


def _evict_one(counts: list[int], total: int, rng: np.random.Generator) -> int:
    """Decrement one site sampled proportionally to the current counts."""
    x = rng.random() * total
    acc = 0.0
    for i, c in enumerate(counts):
        acc += c
        if x < acc:
            counts[i] -= 1
            return total - 1
    # float roundoff can leave x == total; hit the last nonzero site
    for i in range(len(counts) - 1, -1, -1):
        if counts[i] > 0:
            counts[i] -= 1
            return total - 1
    raise RuntimeError("evict called on empty memory")


def pfa_transition(memory: BoundedMemory, observed_site: int, utility: int,
                   s: int, rng: np.random.Generator) -> BoundedMemory:
    """One memory update: insert weight w = s+1 if caught out (utility -1 and
    s > 0) else 1 at the opponent's site, evicting just enough sampled counts
    to respect the capacity. At capacity the total is preserved exactly."""
    n = len(memory.counts)
    if not 0 <= observed_site < n:
        raise IndexError(f"site {observed_site} out of range [0, {n})")
    if utility not in (-1, 0, 1):
        raise ValueError(f"utility must be in {{-1, 0, 1}}, got {utility}")
    w = s + 1 if (utility == -1 and s > 0) else 1
    w = min(w, memory.capacity)  # degenerate s+1 > M: cap so invariants hold
    counts = list(memory.counts)
    total = memory.total
    for _ in range(max(0, total + w - memory.capacity)):
        total = _evict_one(counts, total, rng)
    counts[observed_site] += w
    return BoundedMemory(counts, memory.capacity)


def util_match_distribution(estimate: Sequence[float], d: RhinoDistribution,
                            role: str) -> tuple[float, ...]:
    """Sites weighted by their expected utility against `estimate`, clamped at
    zero; uniform if nothing clamps positive."""
    if role == POACHER:
        utils = equilibrium.poacher_utilities(estimate, d)
    else:
        utils = equilibrium.ranger_utilities(estimate, d)
    clamped = [max(0.0, u) for u in utils]
    total = sum(clamped)
    if total <= 0.0:
        return tuple(1.0 / d.n for _ in range(d.n))
    return tuple(c / total for c in clamped)


def level2_distribution(d: RhinoDistribution) -> tuple[float, ...]:
    """Poacher utility-matching against a probability-matching ranger."""
    return util_match_distribution(d.normalized(), d, POACHER)


def mwu_update(weights: Sequence[float], opponent_site: int, d: RhinoDistribution,
               role: str, eta: float) -> list[float]:
    """Exponential reweighting by counterfactual expected utility against the
    opponent's observed pure action."""
    n = d.n
    if not 0 <= opponent_site < n:
        raise IndexError(f"site {opponent_site} out of range [0, {n})")
    if role == POACHER:
        utils = [-1.0 if i == opponent_site else d.probs[i] for i in range(n)]
    else:
        penalty = -d.probs[opponent_site]
        utils = [1.0 if i == opponent_site else penalty for i in range(n)]
    return [w * float(np.exp(eta * u)) for w, u in zip(weights, utils)]


def _sample(probs: Sequence[float], rng: np.random.Generator) -> int:
    x = rng.random()
    acc = 0.0
    for i, p in enumerate(probs):
        acc += p
        if x < acc:
            return i
    return len(probs) - 1


def _best_responses(role: str, estimate: Sequence[float],
                    d: RhinoDistribution) -> list[int]:
    if role == POACHER:
        utils = equilibrium.poacher_utilities(estimate, d)
    else:
        utils = equilibrium.ranger_utilities(estimate, d)
    best = max(utils)
    eps = equilibrium.BR_ATOL * max(1.0, abs(best))
    return [i for i, u in enumerate(utils) if u >= best - eps]


def _pick(candidates: list[int], rng: np.random.Generator) -> int:
    if len(candidates) == 1:
        return candidates[0]
    return candidates[int(rng.integers(len(candidates)))]


class Agent:
    """One player's evolving strategy. Owned by a single game runner."""

    adaptive = False

    def __init__(self, spec: AgentSpec, d: RhinoDistribution, role: str):
        if role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}, got {role!r}")
        self.spec = spec
        self.d = d
        self.role = role

    def act(self, rng: np.random.Generator) -> int:
        raise NotImplementedError

    def observe(self, outcome: RoundOutcome, rng: np.random.Generator) -> None:
        pass

    def opponent_estimate(self) -> tuple[float, ...] | None:
        """Current opponent-frequency estimate, for trace exports."""
        return None

    def _unpack(self, outcome: RoundOutcome) -> tuple[int, int]:
        """(opponent site, own utility) from this agent's point of view."""
        if self.role == POACHER:
            return outcome.ranger_site, outcome.poacher_utility
        return outcome.poacher_site, outcome.ranger_utility


class FixedStrategyAgent(Agent):
    def __init__(self, spec, d, role, strategy: Sequence[float]):
        super().__init__(spec, d, role)
        self.strategy = tuple(strategy)

    def act(self, rng):
        return _sample(self.strategy, rng)


class StickySiteAgent(Agent):
    """Level-0 player who picks one site at random and never leaves it."""

    def __init__(self, spec, d, role, rng):
        super().__init__(spec, d, role)
        self.site = int(rng.integers(d.n))

    def act(self, rng):
        return self.site


class FictitiousPlayAgent(Agent):
    """Best responds to the opponent's full empirical frequency; unbounded
    exact counts, ties broken uniformly at random, uniform first action."""

    adaptive = True

    def __init__(self, spec, d, role, rng):
        super().__init__(spec, d, role)
        self.counts = [0] * d.n
        self.total = 0
        self.choice = int(rng.integers(d.n))

    def act(self, rng):
        return self.choice

    def observe(self, outcome, rng):
        opp_site, _ = self._unpack(outcome)
        self.counts[opp_site] += 1
        self.total += 1
        estimate = [c / self.total for c in self.counts]
        self.choice = _pick(_best_responses(self.role, estimate, self.d), rng)

    def opponent_estimate(self):
        if self.total == 0:
            return None
        return tuple(c / self.total for c in self.counts)


class UtilityMatchingAgent(Agent):
    """Visits sites proportionally to clamped expected utility against the
    empirical opponent frequency (uniform estimate before any observation)."""

    adaptive = True

    def __init__(self, spec, d, role):
        super().__init__(spec, d, role)
        self.counts = [0] * d.n
        self.total = 0
        uniform = [1.0 / d.n] * d.n
        self.distribution = util_match_distribution(uniform, d, role)

    def act(self, rng):
        return _sample(self.distribution, rng)

    def observe(self, outcome, rng):
        opp_site, _ = self._unpack(outcome)
        self.counts[opp_site] += 1
        self.total += 1
        estimate = [c / self.total for c in self.counts]
        self.distribution = util_match_distribution(estimate, self.d, self.role)

    def opponent_estimate(self):
        if self.total == 0:
            return None
        return tuple(c / self.total for c in self.counts)


class MwuAgent(Agent):
    """Multiplicative-weights learner over sites, renormalized every update."""

    adaptive = True

    def __init__(self, spec, d, role):
        super().__init__(spec, d, role)
        self.eta = spec.eta if spec.eta is not None else DEFAULT_ETA
        self.weights = [1.0 / d.n] * d.n

    def act(self, rng):
        return _sample(self.weights, rng)

    def observe(self, outcome, rng):
        opp_site, _ = self._unpack(outcome)
        updated = mwu_update(self.weights, opp_site, self.d, self.role, self.eta)
        total = sum(updated)
        self.weights = [w / total for w in updated]


class PfaAgent(Agent):
    """Bounded-memory automaton: state = (count vector, committed choice)."""

    adaptive = True

    def __init__(self, spec, d, role):
        super().__init__(spec, d, role)
        self.s = spec.s if spec.s is not None else 0
        self.memory = BoundedMemory.empty(d.n, spec.M)
        self.choice = 0  # empty memory starts at the first site

    def act(self, rng):
        return self.choice

    def observe(self, outcome, rng):
        opp_site, own_utility = self._unpack(outcome)
        self.memory = pfa_transition(self.memory, opp_site, own_utility, self.s, rng)
        estimate = memory_estimate(self.memory)
        self.choice = _pick(_best_responses(self.role, estimate, self.d), rng)

    def opponent_estimate(self):
        if self.memory.total == 0:
            return None
        return memory_estimate(self.memory)


def make_agent(spec: AgentSpec, d: RhinoDistribution, role: str,
               rng: np.random.Generator) -> Agent:
    """Instantiate an agent; may consume randomness (sticky site, FP first
    action)."""
    kind = spec.kind
    if kind in _POACHER_ONLY and role != POACHER:
        raise ValueError(f"{kind} is a poacher strategy, not valid for {role}")
    if kind == "ne":
        result = equilibrium.solve_stage_ne(d)
        strategy = result.poacher_strategy if role == POACHER else result.ranger_strategy
        return FixedStrategyAgent(spec, d, role, strategy)
    if kind in ("pm", "level1"):
        return FixedStrategyAgent(spec, d, role, d.normalized())
    if kind == "level2":
        return FixedStrategyAgent(spec, d, role, level2_distribution(d))
    if kind == "level0-uniform":
        return FixedStrategyAgent(spec, d, role, [1.0 / d.n] * d.n)
    if kind == "level0-sticky":
        return StickySiteAgent(spec, d, role, rng)
    if kind == "fp":
        return FictitiousPlayAgent(spec, d, role, rng)
    if kind == "um":
        return UtilityMatchingAgent(spec, d, role)
    if kind == "mwu":
        return MwuAgent(spec, d, role)
    if kind == "pfa":
        return PfaAgent(spec, d, role)
    raise ValueError(f"unhandled agent kind {kind!r}")
