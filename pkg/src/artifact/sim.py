"""Monte Carlo execution of strategies with Wilson-interval estimates.

Each run ``k`` of a seeded experiment draws from its own Philox stream keyed
by ``SeedSequence([seed, k])``, so results do not depend on how runs are
split across workers.  Finite traces are judged on a trailing window: a
parity condition counts as satisfied when the maximum priority over the last
``window`` states is even.
"""

from __future__ import annotations

import math
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

Trace = namedtuple("Trace", "states actions phases")
Estimate = namedtuple("Estimate", "successes runs value low high")

_BUF = 4096


class StreamRng:
    """Buffered uniform draws from a Philox stream."""

    def __init__(self, seed, stream=0):
        ss = np.random.SeedSequence([int(seed) & (2**64 - 1), int(stream)])
        self._gen = np.random.Generator(np.random.Philox(ss))
        self._buf = []
        self._i = 0

    def random(self):
        if self._i >= len(self._buf):
            self._buf = self._gen.random(_BUF).tolist()
            self._i = 0
        u = self._buf[self._i]
        self._i += 1
        return u


def _succ_tables(m):
    base = m.base
    tab = {}
    for (s, a), d in base._dist.items():
        acc, cum = 0.0, []
        for t, p in sorted(d.items()):
            acc += float(p)
            cum.append((acc, t))
        tab[(s, a)] = cum
    return tab


def run(m, sigma, s, horizon, seed, stream=0, _tables=None):
    """One trace of ``horizon`` states from ``s``; deterministic in ``(seed, stream)``."""
    if horizon < 2:
        raise ValueError("horizon must be at least 2")
    s = m.state_index(s)
    tab = _tables or _succ_tables(m)
    rng = StreamRng(seed, stream)
    ctl = sigma.controller(s, rng)
    states = [s]
    actions = []
    phases = []
    last_phase = None
    for k in range(horizon - 1):
        a = ctl.act(s)
        ph = ctl.phase
        if ph != last_phase:
            phases.append((k, ph))
            last_phase = ph
        cum = tab.get((s, a))
        if cum is None:
            raise RuntimeError(f"strategy chose action {m.base.actions[a]!r} not enabled at {m.base.states[s]!r}")
        if len(cum) == 1:
            t = cum[0][1]
        else:
            u = rng.random()
            t = cum[-1][1]
            for c, x in cum:
                if u < c:
                    t = x
                    break
        ctl.observe(s, a, t)
        actions.append(a)
        states.append(t)
        s = t
    return Trace(states, actions, phases)


def wilson(successes, runs, z=1.959963984540054):
    """Wilson score interval (95% by default)."""
    if runs == 0:
        return 0.0, 1.0
    p = successes / runs
    den = 1 + z * z / runs
    centre = (p + z * z / (2 * runs)) / den
    half = z * math.sqrt(p * (1 - p) / runs + z * z / (4 * runs * runs)) / den
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == runs else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class Reach:
    target: frozenset


def parse_objective(m, text):
    """``"p"`` names a parity condition; ``"reach:s1,s2"`` a target set."""
    if text.startswith("reach:"):
        names = [x for x in text[len("reach:") :].split(",") if x]
        return Reach(frozenset(m.state_index(x) for x in names))
    return m.parity(text)


def judge(trace, objective, window):
    if isinstance(objective, Reach):
        return any(s in objective.target for s in trace.states)
    tail = trace.states[-window:]
    return max(objective.prio[s] for s in set(tail)) % 2 == 0


def _batch(args):
    m, sigma, s, objectives, horizon, window, seed, lo, hi = args
    tab = _succ_tables(m)
    counts = [0] * len(objectives)
    for k in range(lo, hi):
        tr = run(m, sigma, s, horizon, seed, k, tab)
        for j, obj in enumerate(objectives):
            if judge(tr, obj, window):
                counts[j] += 1
    return counts


def estimate_many(m, sigma, s, objectives, runs, horizon, window=None, seed=0, workers=1):
    """Estimates for several objectives from the same simulated runs."""
    window = horizon // 2 if window is None else window
    if not 1 <= window <= horizon:
        raise ValueError("window must lie in 1..horizon")
    objectives = list(objectives)
    if workers > 1 and runs > 1:
        step = math.ceil(runs / workers)
        jobs = [(m, sigma, s, objectives, horizon, window, seed, lo, min(runs, lo + step)) for lo in range(0, runs, step)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_batch, jobs))
        counts = [sum(p[j] for p in parts) for j in range(len(objectives))]
    else:
        counts = _batch((m, sigma, s, objectives, horizon, window, seed, 0, runs))
    out = []
    for c in counts:
        lo, hi = wilson(c, runs)
        out.append(Estimate(c, runs, Fraction(c, runs), lo, hi))
    return out


def estimate(m, sigma, s, objective, runs, horizon, window=None, seed=0, workers=1):
    """Fraction of runs satisfying ``objective`` with a Wilson 95% interval."""
    return estimate_many(m, sigma, s, [objective], runs, horizon, window, seed, workers)[0]
