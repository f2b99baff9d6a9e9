"""Simulation lab for the repeated ranger-poacher security game."""

from .agents import (AgentSpec, BoundedMemory, level2_distribution, make_agent,
                     memory_estimate, mwu_update, pfa_transition,
                     util_match_distribution)
from .analysis import (LevelAssignment, StickinessTable, cluster_levels,
                       last25_frequency, stickiness, strategy_distance)
from .equilibrium import (EquilibriumResult, best_response_poacher,
                          best_response_ranger, maximin_oracle, solve_stage_ne)
from .game import (POACHER, RANGER, RhinoDistribution, RoundOutcome,
                   expected_poacher_utility, expected_ranger_utility,
                   payoff_matrix, resolve_round, sample_rhinos)
from .harness import (BatchStats, GameConfig, GameLog, run_batch, run_game,
                      running_frequencies, significance_sweep)

__version__ = "0.1.0"

__all__ = [
    "AgentSpec", "BatchStats", "BoundedMemory", "EquilibriumResult",
    "GameConfig", "GameLog", "LevelAssignment", "POACHER", "RANGER",
    "RhinoDistribution", "RoundOutcome", "StickinessTable",
    "best_response_poacher", "best_response_ranger", "cluster_levels",
    "expected_poacher_utility", "expected_ranger_utility", "last25_frequency",
    "level2_distribution", "make_agent", "maximin_oracle", "memory_estimate",
    "mwu_update", "payoff_matrix", "pfa_transition", "resolve_round",
    "run_batch", "run_game", "running_frequencies", "sample_rhinos",
    "significance_sweep", "solve_stage_ne", "stickiness", "strategy_distance",
    "util_match_distribution",
]
