import numpy as np
import pytest

from rangergame.equilibrium import (best_response_poacher, best_response_ranger,
                                    maximin_oracle, solve_stage_ne)
from rangergame.game import (RhinoDistribution, expected_poacher_utility,
                             expected_ranger_utility)

from oracles import l1


def test_four_site_equilibrium_matches_reported_values():
    ne = solve_stage_ne(RhinoDistribution((0.2, 0.4, 0.6, 0.8)))
    assert ne.value == pytest.approx(137 / 1375, abs=1e-12)  # 0.0996...
    # exact components; the well-known print (0.08, 0.22, 0.31, 0.39) rounds
    # 0.2145 up to 0.22 to keep the displayed vector summing to 1
    exact_r = (0.2 - ne.value) / 1.2, (0.4 - ne.value) / 1.4, \
        (0.6 - ne.value) / 1.6, (0.8 - ne.value) / 1.8
    assert ne.ranger_strategy == pytest.approx(exact_r, abs=1e-12)
    for got, shown in zip(ne.ranger_strategy, (0.08, 0.22, 0.31, 0.39)):
        assert got == pytest.approx(shown, abs=0.0055)
    for got, want in zip(ne.poacher_strategy,
                         (420 / 1375, 360 / 1375, 315 / 1375, 280 / 1375)):
        assert got == pytest.approx(want, abs=1e-12)
    assert ne.support == frozenset(range(4))


def test_symmetric_equilibrium():
    ne = solve_stage_ne(RhinoDistribution((0.9, 0.9, 0.9)))
    assert ne.value == pytest.approx(0.9 - 1.9 / 3, abs=1e-12)
    for side in (ne.poacher_strategy, ne.ranger_strategy):
        assert side == pytest.approx((1 / 3,) * 3, abs=1e-12)


def test_partial_support_five_sites():
    # frozen from the closed form and cross-checked against the LP oracle
    d = RhinoDistribution((0.9, 0.6, 0.4, 0.9, 0.1))
    ne = solve_stage_ne(d)
    assert ne.support == frozenset({0, 1, 2, 3})
    assert ne.value == pytest.approx(0.2542240, abs=1e-6)
    assert ne.ranger_strategy == pytest.approx(
        (0.3398821, 0.2161100, 0.1041257, 0.3398821, 0.0), abs=1e-6)
    assert ne.poacher_strategy == pytest.approx(
        (0.2200393, 0.2612967, 0.2986248, 0.2200393, 0.0), abs=1e-6)
    oracle = maximin_oracle(d)
    assert oracle.method == "linear_program"
    assert abs(oracle.value - ne.value) < 1e-6
    assert l1(oracle.ranger_strategy, ne.ranger_strategy) < 1e-5
    assert l1(oracle.poacher_strategy, ne.poacher_strategy) < 1e-5


def test_zero_probability_site_leaves_support_when_value_positive():
    ne = solve_stage_ne(RhinoDistribution((0.9, 0.9, 0.9, 0.0)))
    assert ne.support == frozenset({0, 1, 2})
    assert ne.value == pytest.approx(0.9 - 1.9 / 3, abs=1e-12)
    assert ne.poacher_strategy[3] == 0.0
    assert ne.ranger_strategy[3] == 0.0


def test_zero_probability_sites_enter_support_when_value_negative():
    # with nothing to poach the game is pure hide-and-seek, value -1/n
    ne = solve_stage_ne(RhinoDistribution((0.0, 0.0)))
    assert ne.value == pytest.approx(-0.5)
    assert ne.ranger_strategy == pytest.approx((0.5, 0.5))
    assert ne.poacher_strategy == pytest.approx((0.5, 0.5))


def test_waterline_boundary_site():
    # site 4 sits exactly on the waterline (d_4 equals the 3-site value). The
    # ranger's equilibrium strategy stays unique (r_4 = 0) but the poacher has
    # a continuum of maximin strategies; the solver deterministically excludes
    # the boundary site and must still produce a maximin pair.
    v3 = 0.9 - 1.9 / 3
    d = RhinoDistribution((0.9, 0.9, 0.9, v3))
    ne = solve_stage_ne(d)
    assert ne.value == pytest.approx(v3, abs=1e-9)
    assert ne.support == frozenset({0, 1, 2})
    assert ne.ranger_strategy[3] == 0.0
    assert ne.poacher_strategy[3] == 0.0
    oracle = maximin_oracle(d)
    assert abs(oracle.value - ne.value) < 1e-6
    assert l1(oracle.ranger_strategy, ne.ranger_strategy) < 1e-5
    # both poacher strategies are maximin: no ranger pure response beats -v
    for p in (ne.poacher_strategy, oracle.poacher_strategy):
        best_ranger = max(expected_ranger_utility(p, i, d) for i in range(4))
        assert best_ranger == pytest.approx(-ne.value, abs=1e-6)


def _random_distribution(rng):
    n = int(rng.integers(2, 7))
    return RhinoDistribution(tuple(rng.uniform(0.05, 0.95, size=n)))


def test_oracle_equivalence_random_sample():
    rng = np.random.default_rng(123)
    for _ in range(30):
        d = _random_distribution(rng)
        ne = solve_stage_ne(d)
        oracle = maximin_oracle(d)
        assert abs(ne.value - oracle.value) < 1e-3
        assert l1(ne.poacher_strategy, oracle.poacher_strategy) < 0.02
        assert l1(ne.ranger_strategy, oracle.ranger_strategy) < 0.02


def test_support_closed_forms_and_no_profitable_deviation():
    rng = np.random.default_rng(99)
    for _ in range(50):
        d = _random_distribution(rng)
        ne = solve_stage_ne(d)
        probs = d.probs
        weighted = [(1.0 + probs[i]) * ne.poacher_strategy[i] for i in ne.support]
        assert max(weighted) - min(weighted) < 1e-9
        for i in ne.support:
            assert probs[i] - (1.0 + probs[i]) * ne.ranger_strategy[i] == pytest.approx(
                ne.value, abs=1e-9)
        # zero mass off support, and no pure deviation beats the value
        for i in range(d.n):
            if i not in ne.support:
                assert ne.poacher_strategy[i] == 0.0
                assert ne.ranger_strategy[i] == 0.0
            assert expected_poacher_utility(i, ne.ranger_strategy, d) <= ne.value + 1e-9
            assert expected_ranger_utility(ne.poacher_strategy, i, d) <= -ne.value + 1e-9
        best = max(expected_poacher_utility(i, ne.ranger_strategy, d) for i in range(d.n))
        assert best == pytest.approx(ne.value, abs=1e-9)


def test_best_response_poacher_examples():
    d = RhinoDistribution((0.9, 0.6, 0.2))
    assert best_response_poacher((0.0, 0.0, 1.0), d) == [0]
    d2 = RhinoDistribution((0.5, 0.5))
    assert best_response_poacher((0.5, 0.5), d2) == [0, 1]
    d4 = RhinoDistribution((0.2, 0.4, 0.6, 0.8))
    ne = solve_stage_ne(d4)
    utils = [expected_poacher_utility(i, ne.ranger_strategy, d4) for i in range(4)]
    assert max(utils) - min(utils) < 1e-6  # indifference on the support
    assert best_response_poacher(ne.ranger_strategy, d4) == [0, 1, 2, 3]


def test_best_response_ranger_examples():
    d = RhinoDistribution((0.9, 0.6, 0.2))
    assert best_response_ranger((0.0, 1.0, 0.0), d) == [1]  # capture dominates
    d3 = RhinoDistribution((0.9, 0.9, 0.9))
    assert best_response_ranger((1 / 3, 1 / 3, 1 / 3), d3) == [0, 1, 2]
    d2 = RhinoDistribution((0.2, 0.8))
    assert best_response_ranger((0.5, 0.5), d2) == [1]


def test_best_response_members_dominate_non_members():
    rng = np.random.default_rng(5)
    for _ in range(50):
        d = _random_distribution(rng)
        raw = rng.uniform(0, 1, size=d.n)
        est = tuple(raw / raw.sum())
        brs = best_response_poacher(est, d)
        assert brs
        utils = [expected_poacher_utility(i, est, d) for i in range(d.n)]
        worst_in = min(utils[i] for i in brs)
        best_out = max((utils[i] for i in range(d.n) if i not in brs), default=-np.inf)
        assert worst_in >= best_out
