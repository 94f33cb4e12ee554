"""End-component classification: Type I, II and III ECs and existential parity paths.

Conditions are :class:`~artifact.model.ParityMap` objects over state indices of
the base MDP; MDP arguments are views (full MDPs or closed sub-MDPs).

Every region computation takes a ``path`` selecting the solver family:

``"poly"``
    graph algorithms only (requires no sure conditions);
``"parity"``
    Zielonka and the single-parity Büchi product (at most one sure condition);
``"streett"``
    the generalized Streett solver, used even for a single condition;
``"auto"``
    the cheapest applicable of the above.
"""

from __future__ import annotations

from collections import deque, namedtuple
from dataclasses import dataclass

from . import games
from .graphalg import almost_sure_reach, good_subgraphs, internal_acts, mec_decomposition
from .model import EndComponent, prune, restrict

PATHS = ("auto", "poly", "parity", "streett")

TypeOneCheck = namedtuple("TypeOneCheck", "yes win reason")
AsCheck = namedtuple("AsCheck", "yes witness")


def _carrier(C):
    return C.carrier if hasattr(C, "carrier") else frozenset(C)


def c_max_even(C, p):
    """States of ``C`` with even priority above every odd priority in ``C``."""
    car = _carrier(C)
    odd = [p[s] for s in car if p[s] % 2]
    top = max(odd) if odd else -1
    return frozenset(s for s in car if p[s] % 2 == 0 and p[s] > top)


def c_max_odd(C, p):
    """States of ``C`` with odd priority above every even priority in ``C``."""
    car = _carrier(C)
    even = [p[s] for s in car if p[s] % 2 == 0]
    top = max(even) if even else -1
    return frozenset(s for s in car if p[s] % 2 and p[s] > top)


def _resolve_path(path, n_sure):
    if path not in PATHS:
        raise ValueError(f"unknown solver path {path!r}")
    if path == "auto":
        return "poly" if n_sure == 0 else "parity" if n_sure == 1 else "streett"
    if path == "poly" and n_sure > 0:
        raise ValueError("the polynomial path handles no sure condition")
    if path == "parity" and n_sure > 1:
        raise ValueError("the parity path handles at most one sure condition")
    return path


def _state_region(arena, region):
    return frozenset(lab[1] for v, lab in enumerate(arena.labels) if v in region and lab[0] == "s")


def sure_region(m, conditions, path="auto"):
    """States of view ``m`` where some strategy surely satisfies every condition."""
    conditions = list(conditions)
    path = _resolve_path(path, len(conditions))
    if not conditions:
        return frozenset(m.carrier)
    arena = games.game_of_mdp(m, conditions)
    if path == "parity":
        region, _ = games.solve_parity(arena, conditions[0].name)
    else:
        region, _ = games.solve_streett(arena, [c.name for c in conditions], strategy=False, method="recursive")
    return _state_region(arena, region)


def sure_buechi_region(m, R, conditions, path="auto"):
    """States satisfying ``A(p) for all conditions`` together with ``AS(reach R)``.

    Losers of the sure part are pruned first; the remainder is solved on the
    Streett-Büchi arena (or by graph almost-sure reachability when there is no
    sure condition on the polynomial path).
    """
    conditions = list(conditions)
    path = _resolve_path(path, len(conditions))
    W = sure_region(m, conditions, path)
    if not W:
        return frozenset()
    sub = restrict(m, W)
    R = frozenset(R) & W
    if not R:
        return frozenset()
    if path == "poly":
        return almost_sure_reach(sub, R)
    arena = games.build_streett_buechi_arena(sub, R, conditions)
    method = "parity" if path == "parity" else "streett"
    region, _ = games.solve_streett_buechi(arena, strategy=False, method=method)
    return _state_region(arena, region)


# ---------------------------------------------------------------------------
# Type I


def is_type_one_for(m, C, A, ai, path="auto"):
    """Whether every state of ``C`` satisfies the sure conditions ``A`` and reaches
    ``C_max_even(ai)`` almost surely, playing inside ``C``.

    Returns ``(yes, winning states, reason)``; ``reason`` is ``"empty-target"``
    when ``C_max_even(ai)`` is empty.
    """
    target = c_max_even(C, ai)
    if not target:
        return TypeOneCheck(False, frozenset(), "empty-target")
    view = C.view(m)
    win = sure_buechi_region(view, target, A, path)
    yes = win == C.carrier
    return TypeOneCheck(yes, win, None if yes else "losing-states")


def max_type_one_bounded(m, A, ai, k, path="auto"):
    """Maximal Type I(A, {ai}) ECs whose largest odd ``ai``-priority is at most ``k``."""
    A = list(A)
    out = []
    work = [frozenset(m.carrier)]
    while work:
        X = work.pop()
        sub = prune(m, X)
        for C in mec_decomposition(sub):
            high = frozenset(s for s in C.carrier if ai[s] % 2 and ai[s] > k)
            if high:
                work.append(C.carrier - high)
                continue
            res = is_type_one_for(m, C, A, ai, path)
            if res.yes:
                out.append(C)
            elif res.win:
                work.append(res.win)
    out.sort(key=lambda c: min(c.carrier))
    return out


def _maximal(ecs):
    uniq = {}
    for c in ecs:
        uniq.setdefault(c.carrier, c)
    cars = list(uniq)
    keep = [uniq[c] for c in cars if not any(c < d for d in cars)]
    keep.sort(key=lambda c: min(c.carrier))
    return keep


def max_type_one_single(m, A, ai, path="auto"):
    """Maximal Type I(A, {ai}) ECs: maximal elements over every bound ``k``."""
    ks = [-1] + sorted({ai[s] for s in m.carrier if ai[s] % 2})
    found = []
    for k in ks:
        found.extend(max_type_one_bounded(m, A, ai, k, path))
    return _maximal(found)


def max_type_one_all(m, A, path="auto"):
    """Maximal Type I(A, A) ECs.

    A candidate carrier is accepted once, for every ``ai``, the maximal
    Type I(A, {ai}) family inside it is the candidate itself; otherwise it is
    replaced by the (disjoint) members of the first family that differs.
    """
    A = list(A)
    if not A:
        return mec_decomposition(m)
    out = []
    work = [C.carrier for C in mec_decomposition(m)]
    while work:
        X = work.pop()
        sub = prune(m, X)
        mecs = mec_decomposition(sub)
        if len(mecs) != 1 or mecs[0].carrier != X:
            work.extend(C.carrier for C in mecs)
            continue
        split = None
        for ai in A:
            fam = max_type_one_single(sub, A, ai, path)
            if len(fam) != 1 or fam[0].carrier != X:
                split = fam
                break
        if split is None:
            out.append(mecs[0])
        else:
            work.extend(C.carrier for C in split)
    out.sort(key=lambda c: min(c.carrier))
    return out


# ---------------------------------------------------------------------------
# almost-sure conjunctions inside ECs (Type II and III)


def good_sub_ecs(m, C, conditions):
    """Maximal sub-ECs ``D`` of ``C`` with ``c_max_even(D, p)`` nonempty for every condition.

    They are pairwise disjoint because the property is closed under unions of
    overlapping ECs.
    """
    conditions = list(conditions)
    out = []
    work = [_carrier(C)]
    while work:
        X = work.pop()
        sub = prune(m, X)
        for D in mec_decomposition(sub):
            failing = [p for p in conditions if not c_max_even(D, p)]
            if not failing:
                out.append(D)
                continue
            drop = frozenset().union(*(c_max_odd(D, p) for p in failing))
            rest = D.carrier - drop
            if rest:
                work.append(rest)
    out.sort(key=lambda c: min(c.carrier))
    return out


def check_as_conjunction(m, C, conditions):
    """Whether some sub-EC of ``C`` has an even maximum for every condition; returns a witness."""
    conditions = list(conditions)
    C = C if isinstance(C, EndComponent) else EndComponent.make(C, {s: internal_acts(m, s, frozenset(C)) for s in C})
    if all(c_max_even(C, p) for p in conditions):
        return AsCheck(True, C)
    found = good_sub_ecs(m, C, conditions)
    return AsCheck(bool(found), found[0] if found else None)


def max_type_two(m, A, AS, path="auto"):
    """Maximal Type I(A, A) ECs that also pass the almost-sure check for ``A + AS``."""
    A, AS = list(A), list(AS)
    return [C for C in max_type_one_all(m, A, path) if check_as_conjunction(m, C, A + AS).yes]


def type_three_union(m_pruned, A, AS, nz):
    """Union of the carriers of ECs of the pruned MDP passing the check for ``A + AS + [nz]``."""
    conds = list(A) + list(AS) + [nz]
    out = set()
    for C in mec_decomposition(m_pruned):
        for D in good_sub_ecs(m_pruned, C, conds):
            out |= D.carrier
    return frozenset(out)


# ---------------------------------------------------------------------------
# existential conjunctions


@dataclass(frozen=True)
class Lasso:
    """A path ``stem`` followed by ``cycle`` repeated forever; steps are ``(s, a, t)``."""

    stem: tuple
    cycle: tuple

    @property
    def start(self):
        return self.stem[0][0] if self.stem else self.cycle[0][0]

    def cycle_states(self):
        return frozenset(s for s, _, _ in self.cycle)

    def satisfies(self, conditions):
        inf = self.cycle_states()
        return all(p.satisfied_by(inf) for p in conditions)

    def to_json(self, m):
        base = m.base

        def fmt(steps):
            return [[base.states[s], base.actions[a], base.states[t]] for s, a, t in steps]

        return {"stem": fmt(self.stem), "cycle": fmt(self.cycle)}


LassoResult = namedtuple("LassoResult", "yes lasso component")


def _edges(m, s):
    out = []
    for a in internal_acts(m, s):
        for t in sorted(m.post(s, a)):
            out.append((a, t))
    return out


def _bfs_path(m, src, goals, within):
    """Shortest step list from ``src`` to a state of ``goals`` (nonempty if ``src`` is a goal and ``strict``)."""
    prev = {src: None}
    q = deque([src])
    while q:
        u = q.popleft()
        if u in goals:
            steps = []
            while prev[u] is not None:
                pu, a = prev[u]
                steps.append((pu, a, u))
                u = pu
            return steps[::-1]
        for a, t in _edges(m, u):
            if t in within and t not in prev:
                prev[t] = (u, a)
                q.append(t)
    return None


def _cycle_through(m, H):
    """Closed walk inside ``H`` visiting every state of ``H``, starting at ``min(H)``."""
    order = sorted(H)
    head = order[0]
    steps = []
    cur = head
    for target in order[1:] + [head]:
        if target == cur and steps:
            continue
        if target == cur:
            continue
        steps += _bfs_path(m, cur, {target}, H)
        cur = target
    if not steps:
        # singleton with a self-loop
        for a, t in _edges(m, head):
            if t == head:
                return ((head, a, head),)
    return tuple(steps)


def exists_conjunction_parity(m, conditions, s):
    """Whether some path from ``s`` satisfies every condition; with a lasso witness."""
    conditions = list(conditions)
    reach = {s}
    q = deque([s])
    while q:
        u = q.popleft()
        for _, t in _edges(m, u):
            if t not in reach:
                reach.add(t)
                q.append(t)
    succ = lambda u: [t for _, t in _edges(m, u)]
    comps = good_subgraphs(reach, succ, conditions)
    if not comps:
        return LassoResult(False, None, None)
    H = min(comps, key=lambda c: (min(c), len(c)))
    stem = _bfs_path(m, s, {min(H)}, reach)
    return LassoResult(True, Lasso(tuple(stem), _cycle_through(m, H)), frozenset(H))
