"""Witness strategies for accepted clauses.

Strategies are immutable descriptions.  ``strategy.controller(s0, rng)``
returns a fresh per-run controller with ``act(s) -> action``,
``observe(s, a, t)`` and a ``phase`` attribute naming the current mode of
play; ``rng`` is anything with a ``random()`` method returning floats in
``[0, 1)``.

Kinds: deterministic and randomized memoryless strategies, explicit Mealy
machines, and scheduled controllers with an unbounded round counter
(``SigmaC``, ``GlobalStrategy``, ``TypeThree``, ``Mix``, ``ExistSwitch``).
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from . import ecs, games
from .graphalg import almost_sure_reach_strategy, attractor_strategy, internal_acts, mec_decomposition
from .model import restrict

HALF = Fraction(1, 2)


class NotSatisfiable(ValueError):
    """A synthesis precondition does not hold."""


def _sample(dist_cum, u):
    """``dist_cum``: list of (cumulative float, action)."""
    for c, a in dist_cum:
        if u < c:
            return a
    return dist_cum[-1][1]


def _cumulative(dist):
    out, acc = [], 0.0
    for a, p in sorted(dist.items()):
        acc += float(p)
        out.append((acc, a))
    return out


# ---------------------------------------------------------------------------
# memoryless and Mealy strategies


class MemorylessDet:
    kind = "memoryless"

    def __init__(self, table):
        self.table = dict(table)

    def dist(self, s):
        return {self.table[s]: Fraction(1)}

    def controller(self, s0, rng):
        return _MemorylessCtl(self.table)

    def to_json(self, m):
        b = m.base
        return {"kind": self.kind, "table": {b.states[s]: b.actions[a] for s, a in sorted(self.table.items())}}


class _MemorylessCtl:
    phase = "memoryless"

    def __init__(self, table):
        self.table = table

    def act(self, s):
        return self.table[s]

    def observe(self, s, a, t):
        pass


class MemorylessRand:
    kind = "memoryless-rand"

    def __init__(self, table):
        self.table = {s: {a: Fraction(p) for a, p in d.items() if p > 0} for s, d in table.items()}
        self._cum = {s: _cumulative(d) for s, d in self.table.items()}

    def dist(self, s):
        return self.table[s]

    def controller(self, s0, rng):
        return _RandCtl(self._cum, rng)

    def to_json(self, m):
        b = m.base
        return {
            "kind": self.kind,
            "table": {
                b.states[s]: {b.actions[a]: str(p) for a, p in sorted(d.items())} for s, d in sorted(self.table.items())
            },
        }


class _RandCtl:
    phase = "memoryless"

    def __init__(self, cum, rng):
        self.cum = cum
        self.rng = rng

    def act(self, s):
        c = self.cum[s]
        if len(c) == 1:
            return c[0][1]
        return _sample(c, self.rng.random())

    def observe(self, s, a, t):
        pass


class Mealy:
    """Finite-memory strategy: ``init[s]`` mode, ``act[(q, s)]`` distribution, ``delta[(q, s, a, t)]``."""

    kind = "mealy"

    def __init__(self, init, act, delta):
        self.init = dict(init)
        self.act = {k: {a: Fraction(p) for a, p in d.items()} for k, d in act.items()}
        self.delta = dict(delta)
        self._cum = {k: _cumulative(d) for k, d in self.act.items()}

    def modes(self):
        return {q for q, _ in self.act}

    def controller(self, s0, rng):
        return _MealyCtl(self, s0, rng)

    def to_json(self, m):
        b = m.base
        return {
            "kind": self.kind,
            "init": {b.states[s]: q for s, q in sorted(self.init.items())},
            "act": [
                [q, b.states[s], {b.actions[a]: str(p) for a, p in sorted(d.items())}]
                for (q, s), d in sorted(self.act.items())
            ],
            "delta": [
                [q, b.states[s], b.actions[a], b.states[t], r] for (q, s, a, t), r in sorted(self.delta.items())
            ],
        }


class _MealyCtl:
    phase = "mealy"

    def __init__(self, mealy, s0, rng):
        self.m = mealy
        self.q = mealy.init[s0]
        self.rng = rng

    def act(self, s):
        c = self.m._cum[(self.q, s)]
        if len(c) == 1:
            return c[0][1]
        return _sample(c, self.rng.random())

    def observe(self, s, a, t):
        self.q = self.m.delta[(self.q, s, a, t)]


def _renumber(raw_init, raw_act, raw_delta):
    ids = {}

    def qid(x):
        if x not in ids:
            ids[x] = len(ids)
        return ids[x]

    init = {s: qid(q) for s, q in sorted(raw_init.items())}
    act = {(qid(q), s): d for (q, s), d in raw_act.items()}
    delta = {(qid(q), s, a, t): qid(r) for (q, s, a, t), r in raw_delta.items()}
    return Mealy(init, act, delta)


def mealy_from_game(m, arena, strat, starts):
    """Mealy machine on view ``m`` from a player-1 strategy on ``game_of_mdp(m)``."""
    init, act, delta = {}, {}, {}
    todo = deque()
    for s in starts:
        init[s] = strat.initial
        todo.append((strat.initial, s))
    seen = set(todo)
    while todo:
        q, s = todo.popleft()
        v = arena.vertex(("s", s))
        w = strat.choose(q, v)
        a = arena.labels[w][2]
        act[(q, s)] = {a: Fraction(1)}
        q2 = strat.update(strat.update(q, v), w)
        for t in m.post(s, a):
            delta[(q, s, a, t)] = q2
            if (q2, t) not in seen:
                seen.add((q2, t))
                todo.append((q2, t))
    return _renumber(init, act, delta)


def mealy_from_sb(m, arena, strat, starts, R):
    """Mealy machine on view ``m`` from a strategy on the Streett-Büchi arena with target ``R``.

    A successor equal to player 1's pick at the ``(s, a, 1)`` copy is read as
    that copy; any other successor as the ``(s, a, 0)`` copy.  States of ``R``
    have no entry: the machine is meant to be left once ``R`` is reached.
    """
    init, act, delta = {}, {}, {}
    todo = deque()
    for s in starts:
        init[s] = strat.initial
        todo.append((strat.initial, s))
    seen = set(todo)
    while todo:
        q, s = todo.popleft()
        if s in R:
            continue
        v = arena.vertex(("s", s))
        ch = strat.choose(q, v)
        a = arena.labels[ch][2]
        act[(q, s)] = {a: Fraction(1)}
        q2 = strat.update(strat.update(q, v), ch)
        c0 = arena.vertex(("copy", s, a, 0))
        c1 = arena.vertex(("copy", s, a, 1))
        star = arena.labels[strat.choose(q2, c1)][1]
        for t in m.post(s, a):
            r = strat.update(q2, c1 if t == star else c0)
            delta[(q, s, a, t)] = r
            if (r, t) not in seen:
                seen.add((r, t))
                todo.append((r, t))
    return _renumber(init, act, delta)


def sure_strategy(m, conditions, starts=None):
    """Mealy witness for the sure conjunction of ``conditions`` on view ``m``."""
    conditions = list(conditions)
    arena = games.game_of_mdp(m, conditions)
    region, strat = games.solve_streett(arena, [c.name for c in conditions], strategy=True)
    win = frozenset(arena.labels[v][1] for v in region if arena.labels[v][0] == "s")
    starts = win if starts is None else frozenset(starts)
    if not starts <= win:
        raise NotSatisfiable("start state loses the sure conditions")
    return mealy_from_game(m, arena, strat, sorted(starts))


def sure_buechi_strategy(m, R, conditions, starts=None):
    """Strategy surely winning ``conditions`` while reaching ``R`` almost surely (until ``R``)."""
    conditions = list(conditions)
    R = frozenset(R)
    if not conditions:
        region, choice = almost_sure_reach_strategy(m, R)
        starts = region if starts is None else frozenset(starts)
        if not starts <= region:
            raise NotSatisfiable("start state cannot reach the target almost surely")
        return MemorylessDet({s: a for s, a in choice.items() if s not in R})
    W = ecs.sure_region(m, conditions)
    sub = restrict(m, W)
    arena = games.build_streett_buechi_arena(sub, R & W, conditions)
    region, strat = games.solve_streett_buechi(arena, strategy=True)
    win = frozenset(arena.labels[v][1] for v in region if arena.labels[v][0] == "s")
    starts = win if starts is None else frozenset(starts)
    if not starts <= win:
        raise NotSatisfiable("start state loses the sure/almost-sure reachability game")
    return mealy_from_sb(sub, arena, strat, sorted(starts), R)


# ---------------------------------------------------------------------------
# almost-sure conjunctions and schedules


def synth_as_conjunction(m, C, conditions):
    """Randomized memoryless witness: route into a good sub-EC ``D``, then uniform inside ``D``.

    Returns ``(strategy, D)``.
    """
    res = ecs.check_as_conjunction(m, C, conditions)
    if not res.yes:
        raise NotSatisfiable("no sub-EC has an even maximum for every condition")
    D = res.witness
    view = C.view(m) if hasattr(C, "view") else C
    _, route = attractor_strategy(view, D.carrier, existential=True)
    table = {}
    dmap = D.action_map()
    for s in view.carrier:
        if s in D.carrier:
            acts = sorted(dmap[s])
            table[s] = {a: Fraction(1, len(acts)) for a in acts}
        else:
            table[s] = {route[s]: Fraction(1)}
    return MemorylessRand(table), D


def _chain(m, carrier, sigma):
    P = {}
    for s in carrier:
        row = {}
        for a, pa in sigma.dist(s).items():
            for t, p in m.dist(s, a).items():
                row[t] = row.get(t, 0) + pa * p
        P[s] = row
    return P


class Schedule:
    """Episode lengths ``n(i) = block * k(i)``.

    ``k(i)`` is the least ``k >= 1`` with ``sum(q ** k for q in miss) < scale * 2**-(i + shift)``,
    where ``miss[j]`` bounds the probability that target ``j`` is missed during one
    block from any state.
    """

    def __init__(self, block, miss, scale=Fraction(1), shift=0):
        self.block = int(block)
        self.miss = tuple(Fraction(q) for q in miss)
        self.scale = Fraction(scale)
        self.shift = int(shift)
        self._cache = {}

    def budget(self, i):
        return self.scale / 2 ** (i + self.shift)

    def blocks(self, i):
        if i in self._cache:
            return self._cache[i]
        if not self.miss or all(q == 0 for q in self.miss):
            k = 1
        else:
            b = self.budget(i)
            k = 1
            while sum(q**k for q in self.miss) >= b:
                k += 1
        self._cache[i] = k
        return k

    def n(self, i):
        return self.block * self.blocks(i)

    def miss_bound(self, i):
        k = self.blocks(i)
        return sum((q**k for q in self.miss), Fraction(0))

    def to_json(self):
        return {"block": self.block, "miss": [str(q) for q in self.miss], "scale": str(self.scale), "shift": self.shift}

    @classmethod
    def from_json(cls, d):
        return cls(d["block"], [Fraction(q) for q in d["miss"]], Fraction(d["scale"]), d["shift"])


def schedule(m, C, sigma2, targets, *, scale=Fraction(1), shift=0, max_block=100000):
    """Exact schedule for visiting every target while playing ``sigma2`` inside ``C``.

    ``targets`` are state sets or parity maps (mapped to their ``c_max_even`` in ``C``).
    The block length is the least ``L`` after which, from every state, each target has
    been seen among the first ``L`` states with probability at least 1/2.
    """
    carrier = C.carrier if hasattr(C, "carrier") else frozenset(C)
    sets = [frozenset(t) if not hasattr(t, "prio") else ecs.c_max_even(carrier, t) for t in targets]
    if not sets:
        return Schedule(1, (), scale, shift)
    P = _chain(m, carrier, sigma2)
    order = sorted(carrier)
    # f[j][s]: probability that target j is not among the first L states from s
    f = [{s: Fraction(1) for s in order} for _ in sets]
    L = 0
    while True:
        L += 1
        nf = []
        for j, T in enumerate(sets):
            prev = f[j]
            cur = {}
            for s in order:
                if s in T:
                    cur[s] = Fraction(0)
                elif L == 1:
                    cur[s] = Fraction(1)
                else:
                    cur[s] = sum((p * prev[t] for t, p in P[s].items()), Fraction(0))
            nf.append(cur)
        f = nf
        worst = [max(fj.values()) for fj in f]
        if all(w <= HALF for w in worst):
            return Schedule(L, worst, scale, shift)
        if L >= max_block:
            raise NotSatisfiable("a target is not visited almost surely under the exploration strategy")


# ---------------------------------------------------------------------------
# scheduled controllers


class SigmaC:
    """Alternate exploration episodes of ``n(i)`` steps with repair phases.

    An episode succeeds when every ``episode_targets[j]`` was seen; otherwise
    the repair strategies (one per ``repair_targets[j]``, played for the first
    target not yet seen since the episode began) run until every repair target
    has been seen.
    """

    kind = "sigma_c"

    def __init__(self, carrier, explore, sched, episode_targets, repair_targets, repair):
        self.carrier = frozenset(carrier)
        self.explore = explore
        self.schedule = sched
        self.episode_targets = tuple(frozenset(t) for t in episode_targets)
        self.repair_targets = tuple(frozenset(t) for t in repair_targets)
        self.repair = tuple(repair)

    def controller(self, s0, rng):
        return _SigmaCCtl(self, s0, rng)

    def to_json(self, m):
        b = m.base
        return {
            "kind": self.kind,
            "carrier": b.names(self.carrier),
            "explore": self.explore.to_json(m),
            "schedule": self.schedule.to_json(),
            "episode_targets": [b.names(t) for t in self.episode_targets],
            "repair_targets": [b.names(t) for t in self.repair_targets],
            "repair": [r.to_json(m) for r in self.repair],
        }


class _SigmaCCtl:
    def __init__(self, strat, s0, rng):
        self.st = strat
        self.rng = rng
        self.explore = strat.explore.controller(s0, rng)
        self.i = 1
        self.phase = "explore"
        self.episodes = 0
        self.repairs = 0
        self._start_episode()
        self.sub = None
        self.sub_idx = None

    def _start_episode(self):
        self.left = self.st.schedule.n(self.i)
        self.seen_ep = [False] * len(self.st.episode_targets)
        self.seen_rep = [False] * len(self.st.repair_targets)

    def _see(self, s):
        for j, T in enumerate(self.st.episode_targets):
            if s in T:
                self.seen_ep[j] = True
        for j, T in enumerate(self.st.repair_targets):
            if s in T:
                self.seen_rep[j] = True

    def act(self, s):
        st = self.st
        if self.phase == "explore":
            if self.left == 0:
                self.episodes += 1
                ok = all(self.seen_ep)
                self.i += 1
                if ok or all(self.seen_rep):
                    self._start_episode()
                else:
                    self.phase = "repair"
                    self.repairs += 1
                    self.sub = None
            if self.phase == "explore":
                self._see(s)
                self.left -= 1
                return self.explore.act(s)
        # repair
        self._see(s)
        if all(self.seen_rep):
            self.phase = "explore"
            self.sub = None
            self._start_episode()
            self._see(s)
            self.left -= 1
            return self.explore.act(s)
        j = self.seen_rep.index(False)
        if self.sub is None or self.sub_idx != j:
            self.sub = st.repair[j].controller(s, self.rng)
            self.sub_idx = j
        return self.sub.act(s)

    def observe(self, s, a, t):
        if self.phase == "repair" and self.sub is not None:
            self.sub.observe(s, a, t)
        else:
            self.explore.observe(s, a, t)


class GlobalStrategy:
    """Play ``reach`` until a component carrier is entered, then that component's strategy forever."""

    kind = "global"

    def __init__(self, reach, components):
        self.reach = reach
        self.components = tuple((frozenset(c), s) for c, s in components)

    def _component(self, s):
        for car, strat in self.components:
            if s in car:
                return strat
        return None

    def controller(self, s0, rng):
        return _GlobalCtl(self, s0, rng)

    def to_json(self, m):
        return {
            "kind": self.kind,
            "reach": None if self.reach is None else self.reach.to_json(m),
            "components": [{"carrier": m.base.names(c), "strategy": s.to_json(m)} for c, s in self.components],
        }


class _GlobalCtl:
    def __init__(self, strat, s0, rng):
        self.st = strat
        self.rng = rng
        comp = strat._component(s0)
        if comp is not None:
            self.sub = comp.controller(s0, rng)
            self.inside = True
        else:
            self.sub = strat.reach.controller(s0, rng)
            self.inside = False

    @property
    def phase(self):
        return self.sub.phase if self.inside else "reach"

    def act(self, s):
        if not self.inside:
            comp = self.st._component(s)
            if comp is not None:
                self.sub = comp.controller(s, self.rng)
                self.inside = True
        return self.sub.act(s)

    def observe(self, s, a, t):
        if self.inside or self.st._component(t) is None:
            self.sub.observe(s, a, t)


class TypeThree:
    """Rounds of ``n(i)`` exploration steps (``i`` from 0); a round missing a target hands over to ``fallback`` forever."""

    kind = "type_three"

    def __init__(self, carrier, explore, sched, targets, fallback, epsilon):
        self.carrier = frozenset(carrier)
        self.explore = explore
        self.schedule = sched
        self.targets = tuple(frozenset(t) for t in targets)
        self.fallback = fallback
        self.epsilon = Fraction(epsilon)

    def round_success(self, i):
        """Lower bound on the probability that round ``i`` sees every target."""
        return 1 - self.schedule.miss_bound(i)

    def controller(self, s0, rng):
        return _TypeThreeCtl(self, s0, rng)

    def to_json(self, m):
        b = m.base
        return {
            "kind": self.kind,
            "carrier": b.names(self.carrier),
            "epsilon": str(self.epsilon),
            "explore": self.explore.to_json(m),
            "schedule": self.schedule.to_json(),
            "targets": [b.names(t) for t in self.targets],
            "fallback": self.fallback.to_json(m),
        }


class _TypeThreeCtl:
    def __init__(self, strat, s0, rng):
        self.st = strat
        self.rng = rng
        self.explore = strat.explore.controller(s0, rng)
        self.i = 0
        self.phase = "round"
        self.sub = None
        self._start()

    def _start(self):
        self.left = self.st.schedule.n(self.i)
        self.seen = [False] * len(self.st.targets)

    def act(self, s):
        if self.phase == "round":
            if self.left == 0:
                if all(self.seen):
                    self.i += 1
                    self._start()
                else:
                    self.phase = "fallback"
                    self.sub = self.st.fallback.controller(s, self.rng)
            if self.phase == "round":
                for j, T in enumerate(self.st.targets):
                    if s in T:
                        self.seen[j] = True
                self.left -= 1
                return self.explore.act(s)
        return self.sub.act(s)

    def observe(self, s, a, t):
        (self.sub if self.phase == "fallback" else self.explore).observe(s, a, t)


class Mix:
    """Pick one sub-strategy uniformly at the start and commit to it."""

    kind = "mix"

    def __init__(self, strategies):
        if not strategies:
            raise ValueError("mix of no strategies")
        self.strategies = tuple(strategies)
        self._cum = [((k + 1) / len(self.strategies), k) for k in range(len(self.strategies))]

    def controller(self, s0, rng):
        if len(self.strategies) == 1:
            return self.strategies[0].controller(s0, rng)
        k = _sample(self._cum, rng.random())
        ctl = self.strategies[k].controller(s0, rng)
        return _MixCtl(k, ctl)

    def to_json(self, m):
        return {"kind": self.kind, "strategies": [s.to_json(m) for s in self.strategies]}


class _MixCtl:
    def __init__(self, k, ctl):
        self.choice = k
        self.sub = ctl

    @property
    def phase(self):
        return f"mix{self.choice}:{self.sub.phase}"

    def act(self, s):
        return self.sub.act(s)

    def observe(self, s, a, t):
        self.sub.observe(s, a, t)


class ExistSwitch:
    """Follow a fixed path; before each step a fair coin may hand over to ``fallback``.

    Steps are ``(s, a, t)``: the stem, then the cycle repeated forever.  A
    successor other than the expected one also hands over to ``fallback``.
    With an empty cycle the path ends after the stem and control passes to
    ``handoff`` (or ``fallback`` if none is given).
    """

    kind = "exist_switch"

    def __init__(self, stem, cycle, fallback, handoff=None, coin=HALF):
        self.stem = tuple(stem)
        self.cycle = tuple(cycle)
        self.fallback = fallback
        self.handoff = handoff
        self.coin = Fraction(coin)

    def follow_forever_probability(self, m):
        """Probability of never handing over: zero unless the path is finite."""
        if not self.cycle:
            p = Fraction(1)
            for s, a, t in self.stem:
                p *= (1 - self.coin) * m.dist(s, a)[t]
            return p
        return Fraction(0)

    def controller(self, s0, rng):
        return _ExistCtl(self, s0, rng)

    def to_json(self, m):
        b = m.base

        def fmt(steps):
            return [[b.states[s], b.actions[a], b.states[t]] for s, a, t in steps]

        return {
            "kind": self.kind,
            "stem": fmt(self.stem),
            "cycle": fmt(self.cycle),
            "coin": str(self.coin),
            "fallback": self.fallback.to_json(m),
            "handoff": None if self.handoff is None else self.handoff.to_json(m),
        }


class _ExistCtl:
    def __init__(self, strat, s0, rng):
        self.st = strat
        self.rng = rng
        self.pos = 0
        self.phase = "follow"
        self.sub = None
        self.coin = float(strat.coin)
        self._pending = None
        if not strat.stem and not strat.cycle:
            self._switch("handoff" if strat.handoff is not None else "fallback", s0)

    def _step(self):
        st = self.st
        if self.pos < len(st.stem):
            return st.stem[self.pos]
        if not st.cycle:
            return None
        return st.cycle[(self.pos - len(st.stem)) % len(st.cycle)]

    def _switch(self, phase, s):
        self.phase = phase
        strat = self.st.handoff if phase == "handoff" else self.st.fallback
        self.sub = strat.controller(s, self.rng)

    def act(self, s):
        if self.phase == "follow":
            step = self._step()
            if step is None:
                self._switch("handoff" if self.st.handoff is not None else "fallback", s)
            elif step[0] != s or self.rng.random() < self.coin:
                self._switch("fallback", s)
            else:
                return step[1]
        return self.sub.act(s)

    def observe(self, s, a, t):
        if self.phase == "follow":
            step = self._step()
            self.pos += 1
            if t != step[2]:
                self._switch("fallback", t)
        else:
            self.sub.observe(s, a, t)


# ---------------------------------------------------------------------------
# assembling witnesses for clauses


def synth_sigma_c(m, C, A, AS):
    """Counter strategy for a Type II EC ``C``; degenerates to the exploration strategy if ``A`` is empty."""
    A, AS = list(A), list(AS)
    sigma2, D = synth_as_conjunction(m, C, A + AS)
    if not A:
        return sigma2
    view = C.view(m)
    repair_targets = [ecs.c_max_even(C, p) for p in A]
    episode_targets = [ecs.c_max_even(C, p) | ecs.c_max_even(D, p) for p in A]
    repair = [sure_buechi_strategy(view, R, A) for R in repair_targets]
    sched = schedule(m, C, sigma2, episode_targets)
    return SigmaC(C.carrier, sigma2, sched, episode_targets, repair_targets, repair)


def synth_global(m, t_ii_components, sigma_t, sigma_cs):
    """``sigma_t`` until some Type II carrier is entered, then its ``sigma_C``."""
    return GlobalStrategy(sigma_t, list(zip((C.carrier for C in t_ii_components), sigma_cs)))


def synth_type_three(m, D, A, AS, nz, fallback, epsilon=HALF):
    """Type III controller inside the good sub-EC ``D`` with success probability at least ``1 - epsilon``."""
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    A = list(A)
    sigma2, _ = synth_as_conjunction(m, D, A + list(AS) + [nz])
    targets = [ecs.c_max_even(D, p) for p in A]
    if not targets:
        return sigma2
    sched = schedule(m, D, sigma2, targets, scale=epsilon, shift=1)
    return TypeThree(D.carrier, sigma2, sched, targets, fallback, epsilon)


def synth_mix(strategies):
    strategies = list(strategies)
    return strategies[0] if len(strategies) == 1 else Mix(strategies)


def synth_exist_switch(m, lasso, sigma_combi, handoff=None):
    return ExistSwitch(lasso.stem, lasso.cycle, sigma_combi, handoff)


def _project_stem(an, name, lasso):
    """Project a product lasso to the base MDP, cut at the first state of ``T_III``."""
    prod = an.products[name]
    pm = prod.mdp
    base = an.pruned.base
    n = len(prod.lift)
    back = {}
    for s, k in prod.lift.items():
        back[k] = s
        back[k + n] = s
    t3 = an.t_iii[name]
    steps = []
    for u, a, v in list(lasso.stem) + list(lasso.cycle):
        su = back[u]
        if su in t3:
            return steps, su
        steps.append((su, base.action_index(pm.actions[a]), back[v]))
    raise AssertionError("product lasso never enters the Type III union")


def synthesize_clause(m, an, epsilon=HALF):
    """Witness strategy for a clause accepted by :func:`artifact.decide.analyze_clause`."""
    if not an.answer:
        raise NotSatisfiable(f"clause not realizable at the state ({an.reason})")
    A, AS = an.sure, an.almost
    pruned = an.pruned
    sigma_t = sure_buechi_strategy(pruned, an.t_ii, A)
    comps = an.type_two
    sigma_cs = [synth_sigma_c(m, C, A, AS) for C in comps]
    combi = synth_global(m, comps, sigma_t, sigma_cs)
    parts = []
    for p in an.nonzero:
        stem, entry = _project_stem(an, p.name, an.nz_lassos[p.name])
        D = next(D for C in mec_decomposition(pruned) for D in ecs.good_sub_ecs(pruned, C, A + AS + [p]) if entry in D.carrier)
        t3 = synth_type_three(m, D, A, AS, p, combi, epsilon)
        parts.append(ExistSwitch(stem, (), combi, t3))
    for p in an.exists:
        parts.append(synth_exist_switch(m, an.e_lassos[p.name], combi))
    if not parts:
        return combi
    return synth_mix(parts)


# ---------------------------------------------------------------------------
# JSON decoding


def strategy_from_json(m, d):
    b = m.base
    S, A = b.state_index, b.action_index
    kind = d["kind"]
    if kind == "memoryless":
        return MemorylessDet({S(s): A(a) for s, a in d["table"].items()})
    if kind == "memoryless-rand":
        return MemorylessRand({S(s): {A(a): Fraction(p) for a, p in dd.items()} for s, dd in d["table"].items()})
    if kind == "mealy":
        init = {S(s): q for s, q in d["init"].items()}
        act = {(q, S(s)): {A(a): Fraction(p) for a, p in dd.items()} for q, s, dd in d["act"]}
        delta = {(q, S(s), A(a), S(t)): r for q, s, a, t, r in d["delta"]}
        return Mealy(init, act, delta)
    sets = lambda xs: [frozenset(S(s) for s in x) for x in xs]
    if kind == "sigma_c":
        return SigmaC(
            sets([d["carrier"]])[0],
            strategy_from_json(m, d["explore"]),
            Schedule.from_json(d["schedule"]),
            sets(d["episode_targets"]),
            sets(d["repair_targets"]),
            [strategy_from_json(m, r) for r in d["repair"]],
        )
    if kind == "global":
        reach = None if d["reach"] is None else strategy_from_json(m, d["reach"])
        comps = [(sets([c["carrier"]])[0], strategy_from_json(m, c["strategy"])) for c in d["components"]]
        return GlobalStrategy(reach, comps)
    if kind == "type_three":
        return TypeThree(
            sets([d["carrier"]])[0],
            strategy_from_json(m, d["explore"]),
            Schedule.from_json(d["schedule"]),
            sets(d["targets"]),
            strategy_from_json(m, d["fallback"]),
            Fraction(d["epsilon"]),
        )
    if kind == "mix":
        return Mix([strategy_from_json(m, s) for s in d["strategies"]])
    if kind == "exist_switch":
        steps = lambda xs: tuple((S(s), A(a), S(t)) for s, a, t in xs)
        return ExistSwitch(
            steps(d["stem"]),
            steps(d["cycle"]),
            strategy_from_json(m, d["fallback"]),
            None if d["handoff"] is None else strategy_from_json(m, d["handoff"]),
            Fraction(d["coin"]),
        )
    raise ValueError(f"unknown strategy kind {kind!r}")


def enabled_everywhere(m, strategy, states):
    """Actions a memoryless strategy may emit at ``states`` are enabled there (helper for checks)."""
    return all(set(strategy.dist(s)) <= set(internal_acts(m, s)) for s in states)
