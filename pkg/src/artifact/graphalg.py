"""Fixpoint and decomposition primitives over MDP views.

A *view* is an :class:`~artifact.model.Mdp` or :class:`~artifact.model.SubMdp`:
anything exposing ``carrier``, ``acts(s)``, ``post(s, a)`` and ``dist(s, a)``.
Actions whose support leaves the carrier are ignored everywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .model import EndComponent, SubMdp, prune


def internal_acts(m, s, within=None):
    within = m.carrier if within is None else within
    return [a for a in m.acts(s) if m.post(s, a) <= within]


def edge_successors(m, s, within=None):
    """Graph successors of ``s`` using actions that stay inside ``within``."""
    within = m.carrier if within is None else within
    out = set()
    for a in m.acts(s):
        p = m.post(s, a)
        if p <= within:
            out |= p
    return out


def scc(nodes, succ):
    """Tarjan's algorithm, iterative. ``succ(v)`` yields successors (filtered to ``nodes``)."""
    nodes = list(nodes)
    member = set(nodes)
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter([w for w in succ(root) if w in member]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter([x for x in succ(w) if x in member])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(frozenset(comp))
    return out


def good_subgraphs(nodes, succ, prios):
    """Strongly connected subgraphs (with a cycle) whose max priority is even for every condition.

    Every such subgraph is contained in one of the returned sets.
    """
    nodes = set(nodes)
    out = []
    work = [c for c in scc(nodes, succ) if has_cycle(c, succ)]
    while work:
        H = work.pop()
        failing = [pr for pr in prios if max(pr[v] for v in H) % 2]
        if not failing:
            out.append(H)
            continue
        drop = set()
        for pr in failing:
            top = max(pr[v] for v in H)
            drop |= {v for v in H if pr[v] == top}
        rest = set(H) - drop
        if rest:
            work.extend(c for c in scc(rest, lambda v: [w for w in succ(v) if w in rest]) if has_cycle(c, succ))
    return out


def has_cycle(comp, succ):
    if len(comp) > 1:
        return True
    (v,) = tuple(comp)
    return v in set(succ(v))


def _attractor(m, T, existential):
    carrier = m.carrier
    attr = set(T) & carrier
    choice = {}
    pred = {}
    remaining = {}
    for s in carrier:
        for a in m.acts(s):
            p = m.post(s, a)
            if not p <= carrier:
                continue
            remaining[(s, a)] = len(p)
            for t in p:
                pred.setdefault(t, []).append((s, a))
    queue = list(attr)
    while queue:
        t = queue.pop()
        for s, a in pred.get(t, ()):
            if s in attr:
                continue
            if existential:
                attr.add(s)
                choice[s] = a
                queue.append(s)
            else:
                remaining[(s, a)] -= 1
                if remaining[(s, a)] == 0:
                    attr.add(s)
                    choice[s] = a
                    queue.append(s)
    return attr, choice


def attractor_two_player(m, T):
    """States from which some action sequence reaches ``T`` surely (∃a: Post ⊆ Attr)."""
    return frozenset(_attractor(m, T, existential=False)[0])


def attractor_one_player(m, T):
    """States from which ``T`` is reachable in the edge graph (∃a: Post ∩ Attr ≠ ∅)."""
    return frozenset(_attractor(m, T, existential=True)[0])


def attractor_strategy(m, T, existential=False):
    """Attractor together with the witnessing action per attracted state."""
    attr, choice = _attractor(m, T, existential)
    return frozenset(attr), choice


def exists_reach(m, T):
    """States reaching ``T`` with positive probability (alias of the one-player attractor)."""
    return attractor_one_player(m, T)


def is_end_component(m, carrier, acts):
    carrier = frozenset(carrier)
    if not carrier:
        return False
    for s in carrier:
        if not acts.get(s):
            return False
        for a in acts[s]:
            if a not in m.acts(s) or not m.post(s, a) <= carrier:
                return False
    succ = {s: set().union(*(m.post(s, a) for a in acts[s])) for s in carrier}
    comps = scc(carrier, lambda v: succ[v])
    return len(comps) == 1


def mec_decomposition(m):
    """Maximal end components, ordered by smallest state index."""
    result = []
    todo = [frozenset(m.carrier)]
    while todo:
        cand = todo.pop()
        sub = prune(m, cand)
        if not sub.carrier:
            continue
        comps = scc(sub.carrier, lambda v: edge_successors(sub, v))
        if len(comps) == 1:
            result.append(EndComponent.make(sub.carrier, {s: sub.acts(s) for s in sub.carrier}))
        else:
            todo.extend(comps)
    result.sort(key=lambda ec: min(ec.carrier))
    return result


def almost_sure_reach(m, T):
    """States with a strategy reaching ``T`` with probability one."""
    return almost_sure_reach_strategy(m, T)[0]


def almost_sure_reach_strategy(m, T):
    """Almost-sure reachability region and a deterministic memoryless witness.

    The witness at each non-target state picks an action staying in the region
    that reaches a strictly closer layer of the one-player attractor with
    positive probability.
    """
    T = frozenset(T) & m.carrier
    U = set(m.carrier)
    while True:
        allowed = {s: [a for a in m.acts(s) if m.post(s, a) <= U] for s in U}
        reach, choice = _layered_reach(m, U, allowed, T)
        if reach == U:
            break
        # drop unreachable states, then states that can no longer stay inside
        U = set(reach)
        changed = True
        while changed:
            changed = False
            for s in list(U):
                if s in T:
                    continue
                if not any(m.post(s, a) <= U for a in m.acts(s)):
                    U.discard(s)
                    changed = True
    return frozenset(U), choice


def _layered_reach(m, U, allowed, T):
    reach = set(T & U)
    choice = {}
    pred = {}
    for s in U:
        for a in allowed[s]:
            for t in m.post(s, a):
                pred.setdefault(t, []).append((s, a))
    frontier = list(reach)
    while frontier:
        nxt = []
        for t in frontier:
            for s, a in pred.get(t, ()):
                if s not in reach:
                    reach.add(s)
                    choice[s] = a
                    nxt.append(s)
        frontier = nxt
    return reach, choice


def solve_linear(A, b):
    """Exact Gauss-Jordan elimination over ``Fraction``; ``A`` is square, nonsingular."""
    n = len(A)
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        row = [x / pv for x in M[col]]
        M[col] = row
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], row)]
    return [M[i][n] for i in range(n)]


def max_reach_prob(m, T):
    """Exact maximal reachability probabilities and an optimal memoryless strategy.

    Qualitative preprocessing fixes the value-0 and value-1 states; the rest is
    solved by policy iteration with exact linear solves, starting from a policy
    that moves towards ``T`` (so every evaluated system is nonsingular) and
    switching actions only on strict improvement.
    """
    T = frozenset(T) & m.carrier
    one, as_choice = almost_sure_reach_strategy(m, T)
    pos, pos_choice = attractor_strategy(m, T, existential=True)
    values = {s: Fraction(0) for s in m.carrier}
    strategy = {}
    for s in m.carrier:
        acts = internal_acts(m, s)
        if acts:
            strategy[s] = acts[0]
    for s in one:
        values[s] = Fraction(1)
        if s in as_choice:
            strategy[s] = as_choice[s]
    maybe = sorted(pos - one)
    if maybe:
        policy = {s: pos_choice[s] for s in maybe}
        order = {s: i for i, s in enumerate(maybe)}

        def evaluate(pol):
            n = len(maybe)
            A = [[Fraction(0)] * n for _ in range(n)]
            b = [Fraction(0)] * n
            for s in maybe:
                i = order[s]
                A[i][i] += 1
                for t, p in m.dist(s, pol[s]).items():
                    if t in one:
                        b[i] += p
                    elif t in order:
                        A[i][order[t]] -= p
            return dict(zip(maybe, solve_linear(A, b)))

        def q(v, s, a):
            tot = Fraction(0)
            for t, p in m.dist(s, a).items():
                tot += p * (1 if t in one else v.get(t, 0))
            return tot

        while True:
            v = evaluate(policy)
            improved = False
            for s in maybe:
                best, best_val = policy[s], q(v, s, policy[s])
                for a in internal_acts(m, s):
                    val = q(v, s, a)
                    if val > best_val:
                        best, best_val = a, val
                if best != policy[s]:
                    policy[s] = best
                    improved = True
            if not improved:
                break
        values.update(v)
        strategy.update(policy)
    return values, strategy


def restrict_view(m, carrier):
    """Closed sub-view on ``carrier`` using only internal actions (no deadlock check)."""
    carrier = frozenset(carrier)
    return SubMdp(m, carrier, {s: internal_acts(m, s, carrier) for s in carrier})
