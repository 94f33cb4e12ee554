from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact import fixtures, generators, sim, synth

from .conftest import PROPERTY_CASES, seeds


def _uniform(m):
    return synth.MemorylessRand({s: {a: Fraction(1, len(m.acts(s))) for a in m.acts(s)} for s in range(len(m.states))})


def test_runs_are_deterministic():
    m = fixtures.fig4()
    sigma = _uniform(m)
    a = sim.run(m, sigma, "s", 500, seed=11, stream=3)
    b = sim.run(m, sigma, "s", 500, seed=11, stream=3)
    c = sim.run(m, sigma, "s", 500, seed=11, stream=4)
    assert a == b
    assert a.states != c.states
    assert len(a.states) == 500 and len(a.actions) == 499


@pytest.mark.parametrize("horizon", [-1, 0, 1])
def test_short_horizon_rejected(horizon):
    m = fixtures.fig1()
    with pytest.raises(ValueError):
        sim.run(m, _uniform(m), "s0", horizon, seed=0)


def test_window_validated():
    m = fixtures.fig1()
    with pytest.raises(ValueError):
        sim.estimate(m, _uniform(m), "s0", m.parity("p1"), runs=2, horizon=10, window=11)
    with pytest.raises(ValueError):
        sim.estimate(m, _uniform(m), "s0", m.parity("p1"), runs=2, horizon=10, window=0)


def test_disabled_action_is_reported():
    m = fixtures.fig1()
    bad = synth.MemorylessDet({0: 0, 1: 1, 2: 1})
    with pytest.raises(RuntimeError, match="not enabled"):
        sim.run(m, bad, "s0", 5, seed=0)


def test_fig1_mix_ends_in_a_loop():
    m = fixtures.fig1()
    a, b = m.action_index("a"), m.action_index("b")
    mix = synth.Mix([synth.MemorylessDet({0: a, 1: a, 2: b}), synth.MemorylessDet({0: b, 1: a, 2: b})])
    s1, s2 = m.state_index("s1"), m.state_index("s2")
    ends = set()
    for k in range(50):
        tr = sim.run(m, mix, "s0", 20, seed=5, stream=k)
        tail = set(tr.states[1:])
        assert tail in ({s1}, {s2})
        ends |= tail
        assert tr.phases[0][1].startswith("mix")
    assert ends == {s1, s2}


def test_reach_start_state_is_certain():
    m = fixtures.fig7()
    est = sim.estimate(m, _uniform(m), "s", sim.parse_objective(m, "reach:s"), runs=50, horizon=5)
    assert est.value == 1 and est.successes == 50


def test_parse_objective():
    m = fixtures.fig7()
    assert sim.parse_objective(m, "p2") == m.parity("p2")
    assert sim.parse_objective(m, "reach:s,w").target == {m.state_index("s"), m.state_index("w")}


def test_wilson_values():
    lo, hi = sim.wilson(5, 10)
    assert lo == pytest.approx(0.236593, abs=1e-6)
    assert hi == pytest.approx(0.763407, abs=1e-6)
    lo, hi = sim.wilson(0, 10)
    assert lo == 0.0 and hi == pytest.approx(0.277533, abs=1e-6)
    assert sim.wilson(0, 0) == (0.0, 1.0)
    assert sim.wilson(10, 10)[1] == 1.0


def test_workers_do_not_change_estimates():
    m = fixtures.fig4()
    sigma = _uniform(m)
    objs = [m.parity("p1"), m.parity("p2")]
    one = sim.estimate_many(m, sigma, "s", objs, runs=40, horizon=200, seed=9)
    two = sim.estimate_many(m, sigma, "s", objs, runs=40, horizon=200, seed=9, workers=2)
    assert one == two


@pytest.mark.property
@given(seeds, st.integers(0, 4), st.integers(0, 4))
@settings(max_examples=max(1, PROPERTY_CASES // 5))
def test_reach_estimates_are_monotone(seed, a, b):
    m = generators.random_mdp(seed, states=5)
    sigma = _uniform(m)
    small = frozenset({min(a, b)})
    big = frozenset({a, b})
    e_small, e_big = sim.estimate_many(m, sigma, "s0", [sim.Reach(small), sim.Reach(big)], runs=20, horizon=30, seed=seed)
    assert e_small.successes <= e_big.successes
    assert e_small.low <= float(e_small.value) <= e_small.high
