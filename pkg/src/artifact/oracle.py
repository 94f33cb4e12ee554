"""Brute-force reference implementations for desk-scale instances.

Everything here is written from the definitions alone and shares no code
with the solvers: strategies and sub-structures are enumerated outright.
"""

from __future__ import annotations

import itertools
from collections import namedtuple
from fractions import Fraction


class SizeLimit(ValueError):
    pass


class Inconclusive(RuntimeError):
    def __init__(self, bound, lower, upper):
        super().__init__(f"memory bound {bound} does not close the gap")
        self.bound = bound
        self.lower = lower
        self.upper = upper


def _check(n, limit, what):
    if n > limit:
        raise SizeLimit(f"{what} has {n} elements; the oracle accepts at most {limit}")


# ---------------------------------------------------------------------------
# small graph helpers (deliberately naive)


def _reach(start, succ, allowed=None):
    seen = {start} if allowed is None or start in allowed else set()
    stack = list(seen)
    while stack:
        u = stack.pop()
        for w in succ(u):
            if (allowed is None or w in allowed) and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def reachable(start, succ):
    """Vertices reachable from ``start`` (including it)."""
    return _reach(start, succ)


def _strongly_connected(nodes, succ):
    """True iff ``nodes`` (nonempty) is strongly connected with at least one internal edge."""
    nodes = set(nodes)
    if not nodes:
        return False
    v = next(iter(nodes))
    inside = lambda u: [w for w in succ(u) if w in nodes]
    if len(nodes) == 1:
        return v in inside(v)
    if _reach(v, inside) != nodes:
        return False
    pred = {u: [] for u in nodes}
    for u in nodes:
        for w in inside(u):
            pred[w].append(u)
    return _reach(v, lambda u: pred[u]) == nodes


def _subsets(items):
    items = sorted(items)
    for r in range(1, len(items) + 1):
        yield from itertools.combinations(items, r)


def _sccs(nodes, succ):
    """Mutual-reachability classes (quadratic, fine for tiny graphs)."""
    nodes = list(nodes)
    reach = {u: _reach(u, succ, set(nodes)) for u in nodes}
    out, done = [], set()
    for u in nodes:
        if u in done:
            continue
        comp = {w for w in reach[u] if u in reach[w]}
        done |= comp
        out.append(frozenset(comp))
    return out


def _bottom(comp, succ):
    return all(w in comp for u in comp for w in succ(u))


# ---------------------------------------------------------------------------
# games


def _lasso_outcome(v, move):
    """Follow a deterministic move function; return the set of vertices on the final cycle."""
    order = {}
    path = []
    while v not in order:
        order[v] = len(path)
        path.append(v)
        v = move[v]
    return path[order[v] :]


def brute_parity_game(arena, condition, limit=10):
    """Player-1 region by enumerating positional strategies of both players."""
    n = len(arena.owner)
    _check(n, limit, "arena")
    prio = arena.prio(condition)
    p1 = [v for v in range(n) if arena.owner[v] == 1]
    p2 = [v for v in range(n) if arena.owner[v] != 1]
    region = set()
    for c1 in itertools.product(*(arena.succ[v] for v in p1)):
        win = set(range(n))
        for c2 in itertools.product(*(arena.succ[v] for v in p2)):
            move = dict(zip(p1, c1))
            move.update(zip(p2, c2))
            for v in list(win):
                if max(prio[u] for u in _lasso_outcome(v, move)) % 2:
                    win.discard(v)
            if not win:
                break
        region |= win
    return frozenset(region)


def brute_parity_game_opponent(arena, condition, limit=10):
    """Player-2 region: some positional player-2 strategy beats every positional player-1 strategy."""
    n = len(arena.owner)
    _check(n, limit, "arena")
    prio = arena.prio(condition)
    p1 = [v for v in range(n) if arena.owner[v] == 1]
    p2 = [v for v in range(n) if arena.owner[v] != 1]
    region = set()
    for c2 in itertools.product(*(arena.succ[v] for v in p2)):
        win = set(range(n))
        for c1 in itertools.product(*(arena.succ[v] for v in p1)):
            move = dict(zip(p1, c1))
            move.update(zip(p2, c2))
            for v in list(win):
                if max(prio[u] for u in _lasso_outcome(v, move)) % 2 == 0:
                    win.discard(v)
            if not win:
                break
        region |= win
    return frozenset(region)


def _one_player_good(start, succ, nodes, prios):
    """Some strongly connected subset reachable from ``start`` has an even maximum for every condition."""
    reach = _reach(start, succ)
    for H in _subsets(reach & set(nodes)):
        if all(max(pr[u] for u in H) % 2 == 0 for pr in prios) and _strongly_connected(H, succ):
            return True
    return False


BruteStreett = namedtuple("BruteStreett", "region modes")


def streett_upper(arena, prios):
    """Exact region via positional determinacy of the opponent: ``v`` wins iff every
    positional player-2 strategy leaves a good strongly connected set reachable."""
    n = len(arena.owner)
    p2 = [v for v in range(n) if arena.owner[v] != 1]
    win = set(range(n))
    for c2 in itertools.product(*(arena.succ[v] for v in p2)):
        fixed = dict(zip(p2, c2))
        succ = lambda u: [fixed[u]] if u in fixed else list(arena.succ[u])
        for v in list(win):
            if not _one_player_good(v, succ, range(n), prios):
                win.discard(v)
        if not win:
            break
    return frozenset(win)


def _mealy_wins(arena, prios, choice, todo):
    """Vertices won by a Mealy machine ``choice[(q, v)] = (w, q')`` (memory kept at player-2 vertices)."""

    def succ(node):
        q, v = node
        if arena.owner[v] == 1:
            w, r = choice[(q, v)]
            return [(r, w)]
        return [(q, w) for w in arena.succ[v]]

    won = set()
    for v in todo:
        reach = _reach((0, v), succ)
        bad = any(_cycle_with_max(reach, succ, lambda x, pr=pr: pr[x[1]], 1) for pr in prios)
        if not bad:
            won.add(v)
    return won


def brute_streett_game(arena, conditions, memory_bound=4, limit=6, cap=20000):
    """Player-1 region for a conjunction of parity conditions.

    Mealy machines with up to ``memory_bound`` modes (memory updated at
    player-1 moves) are enumerated, at most ``cap`` per size; the union of the
    regions they win is a lower bound.  The exact region from the opponent's
    positional strategies is an upper bound.  When the two meet the region is
    returned with the number of modes that sufficed per vertex; otherwise
    :class:`Inconclusive` is raised.
    """
    n = len(arena.owner)
    _check(n, limit, "arena")
    prios = [arena.prio(c) for c in conditions]
    upper = streett_upper(arena, prios)
    p1 = [v for v in range(n) if arena.owner[v] == 1]
    lower = set()
    modes = {}
    for k in range(1, memory_bound + 1):
        keys = [(q, v) for q in range(k) for v in p1]
        options = [[(w, r) for w in arena.succ[v] for r in range(k)] for _, v in keys]
        count = 0
        for combo in itertools.product(*options):
            count += 1
            if count > cap:
                break
            won = _mealy_wins(arena, prios, dict(zip(keys, combo)), upper - lower)
            for v in won - lower:
                modes[v] = k
            lower |= won
            if lower == upper:
                return BruteStreett(frozenset(lower), modes)
        if lower == upper:
            break
    if lower == upper:
        return BruteStreett(frozenset(lower), modes)
    raise Inconclusive(memory_bound, frozenset(lower), upper)


# ---------------------------------------------------------------------------
# end components and paths


def _post(m, s, a):
    return {t for t, p in m.base.dist(s, a).items() if p > 0}


def brute_ecs(m, limit=7):
    """All end components as ``(carrier, {state: frozenset(actions)})``."""
    states = sorted(m.carrier)
    _check(len(states), limit, "MDP")
    out = []
    for car in _subsets(states):
        C = set(car)
        choices = []
        for s in car:
            inside = [a for a in m.acts(s) if _post(m, s, a) <= C]
            subs = [frozenset(x) for x in _subsets(inside)]
            if not subs:
                break
            choices.append(subs)
        else:
            for acts in itertools.product(*choices):
                amap = dict(zip(car, acts))
                succ = lambda u: set().union(*(_post(m, u, a) for a in amap[u]))
                if _strongly_connected(C, succ):
                    out.append((frozenset(C), amap))
    return out


def is_ec(m, carrier, acts):
    """Closure and strong connectivity of ``(carrier, acts)`` checked from the definition."""
    C = set(carrier)
    if not C or any(not acts.get(s) for s in C):
        return False
    if any(a not in m.acts(s) or not _post(m, s, a) <= C for s in C for a in acts[s]):
        return False
    return _strongly_connected(C, lambda u: set().union(*(_post(m, u, a) for a in acts[u])))


def brute_maximal_ecs(m, limit=7):
    ecs = brute_ecs(m, limit)

    def le(x, y):
        return x[0] <= y[0] and all(x[1][s] <= y[1][s] for s in x[0])

    return [x for x in ecs if not any(le(x, y) and x != y for y in ecs)]


def brute_lasso(m, s, conditions, limit=8):
    """Some path from ``s`` satisfies every condition (strongly connected subsets of the reachable graph)."""
    states = sorted(m.carrier)
    _check(len(states), limit, "MDP")
    car = set(m.carrier)

    def succ(u):
        out = set()
        for a in m.acts(u):
            p = _post(m, u, a)
            if p <= car:
                out |= p
        return out

    prios = [c.prio for c in conditions]
    return _one_player_good(m.state_index(s), succ, car, prios)


def naive_attractor(m, T, existential):
    cur = set(T) & set(m.carrier)
    car = set(m.carrier)
    while True:
        nxt = set(cur)
        for s in car - cur:
            for a in m.acts(s):
                p = _post(m, s, a)
                if not p <= car:
                    continue
                if (existential and p & cur) or (not existential and p <= cur):
                    nxt.add(s)
                    break
        if nxt == cur:
            return frozenset(cur)
        cur = nxt


# ---------------------------------------------------------------------------
# strategies on MDPs


def _cycle_with_max(reach, succ, prio, parity):
    """Some strongly connected subset of ``reach`` has a maximum of the given parity."""
    for o in sorted({prio(u) for u in reach if prio(u) % 2 == parity}):
        low = {u for u in reach if prio(u) <= o}
        inner = lambda u: [w for w in succ(u) if w in low]
        for comp in _sccs(low, inner):
            if any(prio(u) == o for u in comp) and _strongly_connected(comp, inner):
                return True
    return False


def all_cycles_even(start, succ, prio):
    """Every strongly connected set reachable from ``start`` has an even maximum."""
    return not _cycle_with_max(_reach(start, succ), succ, prio, 1)


def chain_check(start, succ, prio, quantifier):
    """Qualitative parity check on a finite Markov chain given by its support graph.

    ``A``: every reachable strongly connected set has an even maximum;
    ``E``: some has; ``AS``: every reachable bottom class has; ``NZ``: some has.
    """
    reach = _reach(start, succ)
    if quantifier == "A":
        return not _cycle_with_max(reach, succ, prio, 1)
    if quantifier == "E":
        return _cycle_with_max(reach, succ, prio, 0)
    bottoms = [c for c in _sccs(reach, succ) if _bottom(c, succ)]
    evens = [max(prio(u) for u in c) % 2 == 0 for c in bottoms]
    return all(evens) if quantifier == "AS" else any(evens)


def det_memoryless_strategies(m):
    states = sorted(m.carrier)
    car = set(m.carrier)
    opts = [[a for a in m.acts(s) if _post(m, s, a) <= car] for s in states]
    for combo in itertools.product(*opts):
        yield dict(zip(states, combo))


def memoryless_satisfies(m, strategy, s, atoms):
    """Whether a deterministic memoryless ``strategy`` satisfies every ``(quantifier, ParityMap)`` at ``s``."""
    succ = lambda u: _post(m, u, strategy[u])
    start = m.state_index(s)
    return all(chain_check(start, succ, lambda u, p=p: p.prio[u], q) for q, p in atoms)


def brute_memoryless_det(m, s, atoms, limit=7):
    """All deterministic memoryless strategies satisfying the atoms at ``s``."""
    _check(len(m.carrier), limit, "MDP")
    return [st for st in det_memoryless_strategies(m) if memoryless_satisfies(m, st, s, atoms)]


def _solve(A, b):
    n = len(A)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for c in range(n):
        r = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[r] = M[r], M[c]
        M[c] = [x / M[c][c] for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


def chain_reach_prob(m, strategy, T):
    """Exact reachability probabilities of ``T`` in the chain induced by a deterministic memoryless strategy."""
    states = sorted(m.carrier)
    T = set(T)
    succ = lambda u: _post(m, u, strategy[u])
    can = {s for s in states if _reach(s, succ) & T}
    unknown = [s for s in states if s in can and s not in T]
    idx = {s: i for i, s in enumerate(unknown)}
    A = [[Fraction(0)] * len(unknown) for _ in unknown]
    b = [Fraction(0)] * len(unknown)
    for s in unknown:
        i = idx[s]
        A[i][i] += 1
        for t, p in m.base.dist(s, strategy[s]).items():
            if t in T:
                b[i] += p
            elif t in idx:
                A[i][idx[t]] -= p
    sol = dict(zip(unknown, _solve(A, b))) if unknown else {}
    return {s: Fraction(1) if s in T else sol.get(s, Fraction(0)) for s in states}


def brute_max_reach(m, T, limit=6):
    """Maximal reachability probabilities by enumerating deterministic memoryless strategies."""
    _check(len(m.carrier), limit, "MDP")
    best = {s: Fraction(0) for s in m.carrier}
    for st in det_memoryless_strategies(m):
        vals = chain_reach_prob(m, st, T)
        for s, v in vals.items():
            if v > best[s]:
                best[s] = v
    return best


# ---------------------------------------------------------------------------
# propositional


def truth_table_sat(cnf, n=None, limit=20):
    """Satisfiability of a DIMACS-style CNF by exhaustive evaluation; returns a model or ``None``."""
    if n is None:
        n = max((abs(x) for cl in cnf for x in cl), default=0)
    _check(n, limit, "CNF")
    for bits in itertools.product((False, True), repeat=n):
        if all(any(bits[abs(x) - 1] == (x > 0) for x in cl) for cl in cnf):
            return bits
    return None


# ---------------------------------------------------------------------------
# verdict cross-check


def cross_check(m, s, clauses, answer, lassos=None, limit=7):
    """Problems found when checking a verdict against brute-force bounds.

    ``clauses`` is the DNF of the formula as ``{quantifier: [ParityMap]}``
    dicts.  A deterministic memoryless strategy satisfying some clause forces
    ``yes``.  A ``yes`` clause needs a path satisfying its sure and almost-sure
    conditions, one more per ``NZ`` atom adding that atom, and one per ``E``
    atom satisfying it with the sure conditions.  Lassos
    (``{label: (stem, cycle, conditions, mdp)}``) must be paths of their MDP whose cycle
    satisfies the conditions.  Raises :class:`SizeLimit` on large instances.
    """
    _check(len(m.carrier), limit, "MDP")
    problems = []
    si = m.state_index(s)
    witnessed = None
    for k, cl in enumerate(clauses):
        atoms = [(q, p) for q in ("A", "AS", "NZ", "E") for p in cl.get(q, [])]
        if any(memoryless_satisfies(m, st, si, atoms) for st in det_memoryless_strategies(m)):
            witnessed = k
            break
    if witnessed is not None and not answer:
        problems.append(f"clause {witnessed} has a deterministic memoryless witness but the verdict is no")
    if answer:
        feasible = False
        for cl in clauses:
            sure = list(cl.get("A", []))
            almost = sure + list(cl.get("AS", []))
            needs = [almost] + [almost + [p] for p in cl.get("NZ", [])] + [sure + [p] for p in cl.get("E", [])]
            if all(brute_lasso(m, si, conds, limit=max(limit, 8)) for conds in needs):
                feasible = True
                break
        if not feasible:
            problems.append("verdict is yes but no clause admits the required paths")
    for label, (stem, cycle, conds, mm) in (lassos or {}).items():
        steps = list(stem) + list(cycle)
        for (u, a, t) in steps:
            if t not in _post(mm, u, a):
                problems.append(f"lasso {label}: step {u}-{a}->{t} is not an edge")
                break
        if not cycle or cycle[-1][2] != cycle[0][0]:
            problems.append(f"lasso {label}: cycle is not closed")
        inf = {u for u, _, _ in cycle}
        if any(max(c.prio[u] for u in inf) % 2 for c in conds):
            problems.append(f"lasso {label}: cycle violates a condition")
    return problems
