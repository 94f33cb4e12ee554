"""Two-player turn-based games on graphs: parity, Streett and Streett-Büchi.

Player 1 wants every parity condition satisfied (max priority seen infinitely
often is even); player 2 is the adversary resolving randomness.

Solvers:

* :func:`solve_parity` is Zielonka's recursive algorithm with strategy
  extraction.
* :func:`solve_streett` either reduces to a parity game via an index
  appearance record (giving a Mealy strategy), or computes the region only
  with a recursive generalized-parity algorithm.
* :func:`solve_streett_buechi` folds the Büchi set in as one more parity
  condition; with a single parity condition it uses a polynomial product that
  remembers the largest priority seen since the last Büchi visit.
"""

from __future__ import annotations

from collections import namedtuple

from .graphalg import good_subgraphs, internal_acts

PLAYER1, PLAYER2 = 1, 2

Solution = namedtuple("Solution", "region strategy")


class Arena:
    """Game graph with vertex owners, per-condition priorities and an optional Büchi set."""

    def __init__(self, owner, succ, priorities=None, buchi=None, labels=None):
        self.owner = tuple(owner)
        self.succ = tuple(tuple(s) for s in succ)
        n = len(self.owner)
        if len(self.succ) != n:
            raise ValueError("owner and successor lists differ in length")
        for v, ws in enumerate(self.succ):
            if not ws:
                raise ValueError(f"vertex {v} has no outgoing edge")
            if any(not 0 <= w < n for w in ws):
                raise ValueError(f"vertex {v} has an edge out of range")
        self.priorities = {}
        for name, pr in (priorities or {}).items():
            pr = tuple(int(x) for x in pr)
            if len(pr) != n:
                raise ValueError(f"priority vector {name!r} is not total")
            self.priorities[name] = pr
        self.buchi = None if buchi is None else frozenset(buchi)
        self.labels = tuple(labels) if labels is not None else tuple(range(n))
        self.index = {lab: v for v, lab in enumerate(self.labels)}
        pred = [[] for _ in range(n)]
        for v, ws in enumerate(self.succ):
            for w in ws:
                pred[w].append(v)
        self.pred = tuple(tuple(p) for p in pred)

    def __len__(self):
        return len(self.owner)

    def vertex(self, label):
        return self.index[label]

    def prio(self, cond):
        if isinstance(cond, str):
            return self.priorities[cond]
        name = getattr(cond, "name", None)
        if name is not None and name in self.priorities:
            return self.priorities[name]
        pr = tuple(int(x) for x in cond)
        if len(pr) != len(self):
            raise ValueError("priority vector is not total")
        return pr

    def buchi_parity(self):
        if self.buchi is None:
            raise ValueError("arena has no Büchi set")
        return tuple(2 if v in self.buchi else 1 for v in range(len(self)))

    def core(self):
        """Vertices other than the intermediate choice vertices of a Streett-Büchi arena."""
        return frozenset(v for v, lab in enumerate(self.labels) if not (isinstance(lab, tuple) and lab[0] == "choice"))


# ---------------------------------------------------------------------------
# arenas from MDPs


def game_of_mdp(m, conditions=None):
    """Bipartite arena: states (player 1 picks an action), pairs (player 2 picks a successor)."""
    conditions = list(m.base.parities.values()) if conditions is None else list(conditions)
    states = sorted(m.carrier)
    labels = [("s", s) for s in states]
    pairs = [(s, a) for s in states for a in internal_acts(m, s)]
    labels += [("sa", s, a) for s, a in pairs]
    idx = {lab: v for v, lab in enumerate(labels)}
    owner = [PLAYER1] * len(states) + [PLAYER2] * len(pairs)
    succ = [[idx[("sa", s, a)] for a in internal_acts(m, s)] for s in states]
    succ += [[idx[("s", t)] for t in sorted(m.post(s, a))] for s, a in pairs]
    pri = {}
    for pm in conditions:
        pri[pm.name] = [pm.prio[lab[1]] for lab in labels]
    return Arena(owner, succ, pri, labels=labels)


def build_streett_buechi_arena(m, R, conditions=()):
    """Arena replacing almost-sure reachability of ``R`` by a sure Büchi objective.

    Vertices: every state; for ``s`` outside ``R`` and each enabled ``a`` a
    player-2 choice vertex ``("choice", s, a)`` and the two copies
    ``("copy", s, a, 0)`` (player 2 resolves the successor, Büchi) and
    ``("copy", s, a, 1)`` (player 1 resolves it).  ``R`` is absorbing and in the
    Büchi set.  Copies, choice vertices and ``R`` have priority 0.
    """
    R = frozenset(R) & m.carrier
    states = sorted(m.carrier)
    labels = [("s", s) for s in states]
    for s in states:
        if s in R:
            continue
        for a in internal_acts(m, s):
            labels += [("choice", s, a), ("copy", s, a, 0), ("copy", s, a, 1)]
    idx = {lab: v for v, lab in enumerate(labels)}
    owner, succ = [], []
    for lab in labels:
        kind = lab[0]
        if kind == "s":
            s = lab[1]
            owner.append(PLAYER1)
            if s in R:
                succ.append([idx[lab]])
            else:
                succ.append([idx[("choice", s, a)] for a in internal_acts(m, s)])
        elif kind == "choice":
            _, s, a = lab
            owner.append(PLAYER2)
            succ.append([idx[("copy", s, a, 0)], idx[("copy", s, a, 1)]])
        else:
            _, s, a, k = lab
            owner.append(PLAYER2 if k == 0 else PLAYER1)
            succ.append([idx[("s", t)] for t in sorted(m.post(s, a))])
    pri = {}
    for pm in conditions:
        pri[pm.name] = [pm.prio[lab[1]] if lab[0] == "s" and lab[1] not in R else 0 for lab in labels]
    buchi = [v for v, lab in enumerate(labels) if (lab[0] == "s" and lab[1] in R) or (lab[0] == "copy" and lab[3] == 0)]
    return Arena(owner, succ, pri, buchi=buchi, labels=labels)


def edge_label(arena, v, w):
    """Action label of an edge; player-1 copies get fresh per-successor labels."""
    lab, tgt = arena.labels[v], arena.labels[w]
    if isinstance(lab, tuple):
        if lab[0] == "s" and isinstance(tgt, tuple) and tgt[0] in ("sa", "choice"):
            return f"a{tgt[2]}"
        if lab[0] == "copy" and lab[3] == 1:
            return f"a{lab[2]}_{lab[1]}_{tgt[1]}"
    return ""


# ---------------------------------------------------------------------------
# attractors and Zielonka


def _owner_bit(owner):
    return 0 if owner == PLAYER1 else 1


def _attr(arena, sub, target, player):
    """Attractor for ``player`` (0 = player 1, 1 = player 2) inside subgame ``sub``."""
    attr = set(target) & sub
    strat = {}
    count = {}
    queue = list(attr)
    owner, succ, pred = arena.owner, arena.succ, arena.pred
    while queue:
        t = queue.pop()
        for v in pred[t]:
            if v not in sub or v in attr:
                continue
            if _owner_bit(owner[v]) == player:
                attr.add(v)
                strat[v] = t
                queue.append(v)
            else:
                c = count.get(v)
                if c is None:
                    c = sum(1 for w in succ[v] if w in sub)
                c -= 1
                count[v] = c
                if c == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strat


def _zielonka(arena, prio, sub):
    W = [set(), set()]
    S = [{}, {}]
    sub = set(sub)
    owner, succ = arena.owner, arena.succ
    while sub:
        d = max(prio[v] for v in sub)
        i = d % 2
        U = {v for v in sub if prio[v] == d}
        A, sa = _attr(arena, sub, U, i)
        W1, S1 = _zielonka(arena, prio, sub - A)
        if not W1[1 - i]:
            W[i] |= sub
            S[i].update(S1[i])
            S[i].update(sa)
            for v in U:
                if _owner_bit(owner[v]) == i:
                    S[i][v] = next(w for w in succ[v] if w in sub)
            return W, S
        B, sb = _attr(arena, sub, W1[1 - i], 1 - i)
        W[1 - i] |= B
        S[1 - i].update({v: w for v, w in S1[1 - i].items() if v in W1[1 - i]})
        S[1 - i].update(sb)
        sub -= B
    return W, S


def _compress(prio, vertices=None):
    """Order-preserving priority compression keeping parities and relative order.

    Consecutive distinct values of equal parity collapse to one; the result
    uses values 0..d with the smallest value's parity kept.
    """
    vals = sorted(set(prio if vertices is None else (prio[v] for v in vertices)))
    mapping = {}
    cur = None
    for x in vals:
        if cur is None:
            cur = x % 2
        elif x % 2 != cur % 2:
            cur += 1
        mapping[x] = cur
    return tuple(mapping.get(p, p) for p in prio)


class ArenaStrategy:
    """Finite-memory player-1 strategy on an arena.

    Memory is read as *the record before the current vertex is processed*:
    at vertex ``v`` with memory ``q`` player 1 moves to ``choose(q, v)`` and the
    memory becomes ``update(q, v)``.
    """

    def __init__(self, initial, table, step):
        self.initial = initial
        self.table = table
        self._step = step

    def choose(self, mem, v):
        return self.table[(v, mem)]

    def update(self, mem, v):
        return self._step(mem, v)[0]

    def defined(self, mem, v):
        return (v, mem) in self.table

    def modes(self):
        return {q for (_, q) in self.table}


def _solve_with_memory(arena, initial, step):
    """Solve the parity game on the product ``(v, memory)`` built lazily from ``(v, initial)``."""
    node_id = {}
    nodes = []
    owner, succ_list, color = [], [], []
    stack = []
    for v in range(len(arena)):
        key = (v, initial)
        node_id[key] = len(nodes)
        nodes.append(key)
        stack.append(key)
    pending = []
    while stack:
        key = stack.pop()
        pending.append(key)
        v, mem = key
        nmem, _ = step(mem, v)
        for w in arena.succ[v]:
            nk = (w, nmem)
            if nk not in node_id:
                node_id[nk] = len(nodes)
                nodes.append(nk)
                stack.append(nk)
    owner = [arena.owner[v] for v, _ in nodes]
    succ_list = [None] * len(nodes)
    color = [0] * len(nodes)
    for k, (v, mem) in enumerate(nodes):
        nmem, col = step(mem, v)
        color[k] = col
        succ_list[k] = [node_id[(w, nmem)] for w in arena.succ[v]]
    prod = Arena(owner, succ_list)
    W, S = _zielonka(prod, _compress(color), set(range(len(nodes))))
    region = frozenset(v for v in range(len(arena)) if node_id[(v, initial)] in W[0])
    table = {}
    for k, w in S[0].items():
        if k in W[0] and arena.owner[nodes[k][0]] == PLAYER1:
            table[nodes[k]] = nodes[w][0]
    return region, ArenaStrategy(initial, table, step)


def solve_parity(arena, condition):
    """Winning region of player 1 and a positional winning strategy on it."""
    prio = arena.prio(condition)
    W, S = _zielonka(arena, _compress(prio), set(range(len(arena))))
    region = frozenset(W[0])
    strat = {v: w for v, w in S[0].items() if v in region and arena.owner[v] == PLAYER1}
    return Solution(region, strat)


def _positional(strat, prio):
    table = {(v, None): w for v, w in strat.items()}
    return ArenaStrategy(None, table, lambda mem, v: (None, prio[v]))


# ---------------------------------------------------------------------------
# Streett games


def streett_pairs(prios):
    """Streett pairs (R, G) of a conjunction of parity conditions.

    Each odd value ``o`` of a (compressed) condition gives ``R = {p = o}``,
    ``G = {p even, p > o}``.  Pairs of the same condition are listed with
    decreasing ``o``, which keeps them in that relative order in every
    reachable index appearance record.
    """
    pairs = []
    for pr in prios:
        pr = _compress(pr)
        for o in sorted({p for p in pr if p % 2}, reverse=True):
            R = frozenset(v for v, p in enumerate(pr) if p == o)
            G = frozenset(v for v, p in enumerate(pr) if p % 2 == 0 and p > o)
            pairs.append((R, G))
    return pairs


def _iar_step_factory(n_vertices, pairs):
    n = len(pairs)
    good = [frozenset(i for i, (_, G) in enumerate(pairs) if v in G) for v in range(n_vertices)]
    bad = [frozenset(i for i, (R, G) in enumerate(pairs) if v in R and v not in G) for v in range(n_vertices)]
    top = 2 * n + 2

    def step(perm, v):
        g, b = good[v], bad[v]
        ell = n + 1
        r = None
        for pos, i in enumerate(perm, 1):
            if i in g:
                if ell == n + 1:
                    ell = pos
            elif r is None and i in b:
                r = pos
        if g:
            new = tuple([i for i in perm if i not in g] + [i for i in perm if i in g])
        else:
            new = perm
        c = 2 * r + 1 if (r is not None and r < ell) else 2 * ell
        return new, top - c

    return step, tuple(range(n))


def _backward(targets, sub, pred):
    seen = set(targets)
    stack = list(seen)
    while stack:
        t = stack.pop()
        for v in pred[t]:
            if v in sub and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _genparity(arena, prios, sub):
    """Region-only recursive solver for conjunctions of parity conditions."""
    W0, W1 = set(), set()
    sub = set(sub)
    owner, succ = arena.owner, arena.succ
    while sub:
        if not prios:
            W0 |= sub
            break
        p2_choice = any(owner[v] == PLAYER2 and sum(1 for w in succ[v] if w in sub) > 1 for v in sub)
        if not p2_choice:
            inside = lambda v: [w for w in succ[v] if w in sub]
            good = set().union(*good_subgraphs(sub, inside, prios)) if sub else set()
            win = _backward(good, sub, arena.pred)
            # player-2 vertices have a single successor, so a backward step is forced
            W0 |= win
            W1 |= sub - win
            break
        maxes = [max(pr[v] for v in sub) for pr in prios]
        odd = [i for i, d in enumerate(maxes) if d % 2]
        if odd:
            i = odd[0]
            U = {v for v in sub if prios[i][v] == maxes[i]}
            A, _ = _attr(arena, sub, U, 1)
            w0, _ = _genparity(arena, prios, sub - A)
            if not w0:
                W1 |= sub
                break
            B, _ = _attr(arena, sub, w0, 0)
            W0 |= B
            sub -= B
        else:
            progressed = False
            for i in range(len(prios)):
                U = {v for v in sub if prios[i][v] == maxes[i]}
                A, _ = _attr(arena, sub, U, 0)
                _, w1 = _genparity(arena, prios, sub - A)
                if w1:
                    B, _ = _attr(arena, sub, w1, 1)
                    W1 |= B
                    sub -= B
                    progressed = True
                    break
            if not progressed:
                W0 |= sub
                break
    return W0, W1


def solve_streett(arena, conditions, *, strategy=True, method="auto"):
    """Player-1 region for the conjunction of ``conditions``.

    ``method``: ``"auto"`` (Zielonka for one condition; otherwise index
    appearance record when a strategy is wanted, recursive solver if not),
    ``"iar"`` or ``"recursive"``.  The strategy (an :class:`ArenaStrategy`
    whose memory is the appearance record) is ``None`` when not requested.
    """
    prios = [arena.prio(c) for c in conditions]
    if not prios:
        region = frozenset(range(len(arena)))
        table = {(v, None): arena.succ[v][0] for v in range(len(arena)) if arena.owner[v] == PLAYER1}
        return Solution(region, ArenaStrategy(None, table, lambda mem, v: (None, 0)) if strategy else None)
    if method == "auto" and len(prios) == 1:
        region, strat = solve_parity(arena, prios[0])
        return Solution(region, _positional(strat, prios[0]) if strategy else None)
    if method == "recursive" or (method == "auto" and not strategy):
        W0, _ = _genparity(arena, [_compress(p) for p in prios], set(range(len(arena))))
        region = frozenset(W0)
        if not strategy:
            return Solution(region, None)
    if method not in ("auto", "iar", "recursive"):
        raise ValueError(f"unknown Streett method {method!r}")
    step, init = _iar_step_factory(len(arena), streett_pairs(prios))
    region, strat = _solve_with_memory(arena, init, step)
    return Solution(region, strat)


def _segment_step_factory(prio, buchi):
    def step(mem, v):
        m = prio[v] if mem is None else max(mem, prio[v])
        if v in buchi:
            return None, m + 2
        return m, 1

    return step


def solve_streett_buechi(arena, *, strategy=True, method="streett"):
    """Region winning every parity condition of the arena and its Büchi set.

    ``method``: ``"auto"`` (graph-free Zielonka on the Büchi map when there is
    no parity condition, the segment-maximum product for one condition, the
    Streett solver otherwise), ``"parity"`` (requires at most one condition) or
    ``"streett"`` (treat Büchi as one more condition of the Streett solver).
    """
    names = sorted(arena.priorities)
    buchi = arena.buchi_parity()
    if method == "streett":
        conds = [arena.priorities[n] for n in names] + [buchi]
        return solve_streett(arena, conds, strategy=strategy, method="iar" if strategy else "recursive")
    if method not in ("auto", "parity"):
        raise ValueError(f"unknown Streett-Büchi method {method!r}")
    if not names:
        region, strat = solve_parity(arena, buchi)
        return Solution(region, _positional(strat, buchi) if strategy else None)
    if len(names) == 1:
        step = _segment_step_factory(_compress(arena.priorities[names[0]]), arena.buchi)
        region, strat = _solve_with_memory(arena, None, step)
        return Solution(region, strat if strategy else None)
    if method == "parity":
        raise ValueError("the parity path handles at most one condition")
    conds = [arena.priorities[n] for n in names] + [buchi]
    return solve_streett(arena, conds, strategy=strategy)


# ---------------------------------------------------------------------------
# DOT export


def arena_to_dot(arena, region=None, name="arena"):
    region = frozenset() if region is None else region
    out = [f"digraph {name} {{"]
    for v, lab in enumerate(arena.labels):
        shape = "circle" if arena.owner[v] == PLAYER1 else "box"
        pr = ",".join(str(arena.priorities[n][v]) for n in sorted(arena.priorities))
        style = ",style=filled,fillcolor=lightgreen" if v in region else ""
        periph = ",peripheries=2" if arena.buchi and v in arena.buchi else ""
        out.append(f'  v{v} [shape={shape},label="{lab}\\n{pr}"{style}{periph}];')
    for v, ws in enumerate(arena.succ):
        for w in ws:
            lab = edge_label(arena, v, w)
            out.append(f'  v{v} -> v{w}' + (f' [label="{lab}"]' if lab else "") + ";")
    out.append("}")
    return "\n".join(out) + "\n"
