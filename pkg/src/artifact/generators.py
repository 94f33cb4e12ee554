"""Seeded random instances: MDPs, arenas, CNFs and clauses.

A generator called with the same arguments returns the same object, bit for bit,
on every platform (the stdlib Mersenne Twister is seeded explicitly).
"""

from __future__ import annotations

import random
from fractions import Fraction

from .games import PLAYER1, PLAYER2, Arena
from .model import Mdp
from .qpl import QUANTIFIERS, Clause


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _split(rng, k, den):
    """``k`` positive fractions with denominator dividing ``den`` summing to one."""
    cuts = sorted(rng.sample(range(1, den), k - 1)) if k > 1 else []
    bounds = [0] + cuts + [den]
    return [Fraction(bounds[i + 1] - bounds[i], den) for i in range(k)]


def random_mdp(seed, states=5, actions=2, priorities=4, conditions=2, *, branching=2, density=0.7, den=4):
    """Random valid MDP.

    Every state gets between one and ``actions`` enabled actions (each extra
    action kept with probability ``density``), each with up to ``branching``
    successors.  Conditions are named ``p1..pk`` with priorities in
    ``0..priorities-1``.
    """
    rng = _rng(seed)
    names = [f"s{i}" for i in range(states)]
    acts = [f"a{j}" for j in range(actions)]
    trans = {}
    for s in names:
        enabled = [a for a in acts if rng.random() < density] or [rng.choice(acts)]
        for a in enabled:
            k = rng.randint(1, min(branching, states, den))
            succ = rng.sample(names, k)
            trans[(s, a)] = dict(zip(succ, _split(rng, k, den)))
    parities = {f"p{c + 1}": {s: rng.randrange(priorities) for s in names} for c in range(conditions)}
    return Mdp(names, acts, trans, parities)


def random_arena(seed, vertices=6, priorities=4, conditions=1, *, out_degree=2, even_weight=None):
    """Random two-player arena with conditions ``p1..pk``.

    With ``even_weight`` set, each priority is even with that probability
    (uniform among the even or odd values below ``priorities``).
    """
    rng = _rng(seed)
    owner = [rng.choice((PLAYER1, PLAYER2)) for _ in range(vertices)]
    succ = [sorted(rng.sample(range(vertices), rng.randint(1, min(out_degree, vertices)))) for _ in range(vertices)]
    evens = list(range(0, priorities, 2))
    odds = list(range(1, priorities, 2)) or evens

    def prio():
        if even_weight is None:
            return rng.randrange(priorities)
        return rng.choice(evens if rng.random() < even_weight else odds)

    pri = {f"p{c + 1}": [prio() for _ in range(vertices)] for c in range(conditions)}
    return Arena(owner, succ, pri)


def random_cnf(seed, variables=4, clauses=6, width=3):
    """Random CNF in DIMACS style: a list of clauses of nonzero ints."""
    rng = _rng(seed)
    out = []
    for _ in range(rng.randint(1, clauses)):
        k = rng.randint(1, min(width, variables))
        vs = rng.sample(range(1, variables + 1), k)
        out.append([v if rng.random() < 0.5 else -v for v in vs])
    return out


def random_clause(seed, names, *, sure=None, max_atoms=3):
    """Random clause over condition ``names`` (duals allowed).

    ``sure`` fixes the number of ``A`` atoms; the rest are spread over
    ``AS``, ``NZ`` and ``E``.
    """
    rng = _rng(seed)
    pool = list(names) + [n + "~" for n in names]
    n_sure = rng.randint(0, 2) if sure is None else sure
    parts = {q: set() for q in QUANTIFIERS}
    parts["A"] = set(rng.sample(pool, min(n_sure, len(pool))))
    for _ in range(rng.randint(1 if n_sure == 0 else 0, max_atoms)):
        parts[rng.choice(("AS", "NZ", "E"))].add(rng.choice(pool))
    return Clause(*(frozenset(parts[q]) for q in QUANTIFIERS))
