"""Realizability of QPL formulas at a state: clause procedure, solver dispatch, SAT encoder."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import ecs
from .model import Mdp, reach_to_parity_product, resolve_parity, restrict
from .qpl import QUANTIFIERS, Atom, Clause, bind, clauses_of, conj, disj, parse, pretty

SCHEMA_VERSION = 1


class InvariantViolation(RuntimeError):
    """An internal consistency check failed (a bug, not a property of the input)."""


@dataclass
class ClauseAnalysis:
    """Everything computed while deciding one clause (state ids, not names)."""

    answer: bool
    state: int
    clause: Clause
    path: str
    reason: str | None = None
    sure: list = field(default_factory=list)
    almost: list = field(default_factory=list)
    nonzero: list = field(default_factory=list)
    exists: list = field(default_factory=list)
    type_two: list = field(default_factory=list)
    t_ii: frozenset = frozenset()
    s1: frozenset = frozenset()
    pruned: object = None
    t_iii: dict = field(default_factory=dict)
    products: dict = field(default_factory=dict)
    nz_lassos: dict = field(default_factory=dict)
    e_lassos: dict = field(default_factory=dict)


@dataclass
class Verdict:
    answer: bool
    state: str
    clause: Clause | None
    path: str
    reason: str | None = None
    certificates: dict = field(default_factory=dict)
    clauses_checked: int = 1
    seconds: float = 0.0
    formula: str | None = None
    analysis: ClauseAnalysis | None = field(default=None, repr=False, compare=False)

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "answer": "yes" if self.answer else "no",
            "state": self.state,
            "formula": self.formula,
            "clause": None if self.clause is None else self.clause.to_json(),
            "path": self.path,
            "reason": self.reason,
            "certificates": self.certificates,
            "clauses_checked": self.clauses_checked,
            "timing": {"seconds": self.seconds},
        }

    @classmethod
    def from_json(cls, d):
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported verdict schema {d.get('schema_version')!r}")
        if d["answer"] not in ("yes", "no"):
            raise ValueError("answer must be 'yes' or 'no'")
        return cls(
            answer=d["answer"] == "yes",
            state=d["state"],
            clause=None if d["clause"] is None else Clause.from_json(d["clause"]),
            path=d["path"],
            reason=d.get("reason"),
            certificates=d.get("certificates", {}),
            clauses_checked=d.get("clauses_checked", 1),
            seconds=d.get("timing", {}).get("seconds", 0.0),
            formula=d.get("formula"),
        )


def _bind_clause(m, c):
    return {q: [resolve_parity(m, n) for n in sorted(getattr(c, q))] for q in QUANTIFIERS}


def analyze_clause(m, s, c, path="auto", *, recheck=True):
    """Run the clause procedure and keep every intermediate set."""
    s = m.state_index(s)
    b = _bind_clause(m, c)
    A, AS, NZ, E = b["A"], b["AS"], b["NZ"], b["E"]
    resolved = ecs._resolve_path(path, len(A))
    out = ClauseAnalysis(False, s, c, resolved, sure=A, almost=AS, nonzero=NZ, exists=E)

    if A and s not in ecs.sure_region(m, A, resolved):
        out.reason = "sure-conditions"
        return out
    out.type_two = ecs.max_type_two(m, A, AS, resolved)
    out.t_ii = frozenset().union(*(C.carrier for C in out.type_two))
    out.s1 = ecs.sure_buechi_region(m, out.t_ii, A, resolved)
    if s not in out.s1:
        out.reason = "not-in-S1"
        return out
    pruned = restrict(m, out.s1)
    out.pruned = pruned
    if recheck and ecs.sure_buechi_region(pruned, out.t_ii, A, resolved) != out.s1:
        raise InvariantViolation("sure and almost-sure part does not hold on the pruned MDP")

    for p in NZ:
        t3 = ecs.type_three_union(pruned, A, AS, p)
        out.t_iii[p.name] = t3
        if not t3:
            out.reason = f"no-type-three:{p.name}"
            return out
        prod = reach_to_parity_product(pruned, t3, A)
        out.products[p.name] = prod
        res = ecs.exists_conjunction_parity(prod.mdp, list(prod.lifted) + [prod.reach_parity], prod.lift[s])
        if not res.yes:
            out.reason = f"no-nz-path:{p.name}"
            return out
        out.nz_lassos[p.name] = res.lasso

    for p in E:
        res = ecs.exists_conjunction_parity(pruned, A + [p], s)
        if not res.yes:
            out.reason = f"no-e-path:{p.name}"
            return out
        out.e_lassos[p.name] = res.lasso

    out.answer = True
    return out


def _names(m, states):
    return m.base.names(states)


def _certificates(m, an):
    cert = {
        "type_two_ecs": [_names(m, C.carrier) for C in an.type_two],
        "T_II": _names(m, an.t_ii),
        "S1": _names(m, an.s1),
        "T_III": {k: _names(m, v) for k, v in an.t_iii.items()},
        "lassos": {},
    }
    for k, lasso in an.nz_lassos.items():
        cert["lassos"][f"NZ({k})"] = lasso.to_json(an.products[k].mdp)
    for k, lasso in an.e_lassos.items():
        cert["lassos"][f"E({k})"] = lasso.to_json(m)
    return cert


def _verdict(m, an, seconds):
    return Verdict(
        answer=an.answer,
        state=m.base.states[an.state],
        clause=an.clause,
        path=an.path,
        reason=an.reason,
        certificates=_certificates(m, an),
        seconds=seconds,
        analysis=an,
    )


def decide_clause(m, s, c, path="auto"):
    """Decide whether one strategy from ``s`` satisfies every atom of clause ``c``."""
    t0 = time.perf_counter()
    an = analyze_clause(m, s, c, path)
    return _verdict(m, an, time.perf_counter() - t0)


def dispatch(m, s, c, path="auto"):
    """Route by the number of sure atoms: none, one, or several (see :data:`ecs.PATHS`)."""
    return decide_clause(m, s, c, path)


def order_clauses(clauses):
    """Most constrained clauses first; stable otherwise."""
    return sorted(clauses, key=lambda c: -len(c.atoms()))


def decide_formula(m, s, f, path="auto", *, threads=1, cap=None):
    """Decide a formula: negation-free form, DNF, and a clause-by-clause check."""
    t0 = time.perf_counter()
    if isinstance(f, str):
        f = parse(f)
    bind(f, m)
    kwargs = {} if cap is None else {"cap": cap}
    clauses = order_clauses(clauses_of(f, **kwargs))

    def run(c):
        return analyze_clause(m, s, c, path)

    results = []
    if threads > 1 and len(clauses) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(run, clauses))
    else:
        for c in clauses:
            an = run(c)
            results.append(an)
            if an.answer:
                break
    chosen = next((an for an in results if an.answer), results[-1])
    v = _verdict(m, chosen, time.perf_counter() - t0)
    v.clauses_checked = results.index(chosen) + 1
    v.formula = pretty(f)
    if not chosen.answer:
        v.clause = None
    return v


# ---------------------------------------------------------------------------
# SAT hardness encoding


def sat_names(i):
    return f"a{i}", f"na{i}"


def encode_sat(cnf, n=None):
    """MDP, formula and start state whose realizability equals satisfiability of ``cnf``.

    ``cnf`` is a list of clauses, each a list of nonzero ints (DIMACS style).
    Every state has one action per state leading there with probability one;
    ``pa{i}`` gives 2 at ``a{i}``, 3 at ``na{i}`` and 1 elsewhere, ``pna{i}``
    symmetrically.
    """
    if n is None:
        n = max((abs(x) for cl in cnf for x in cl), default=1)
    if n < 1:
        raise ValueError("need at least one variable")
    for cl in cnf:
        if not cl:
            raise ValueError("empty clause")
        if any(x == 0 or abs(x) > n for x in cl):
            raise ValueError(f"bad literal in clause {cl}")
    states = [name for i in range(1, n + 1) for name in sat_names(i)]
    trans = {(x, y): {y: 1} for x in states for y in states}
    parities = {}
    for i in range(1, n + 1):
        pos, neg = sat_names(i)
        parities[f"p{pos}"] = {x: 2 if x == pos else 3 if x == neg else 1 for x in states}
        parities[f"p{neg}"] = {x: 2 if x == neg else 3 if x == pos else 1 for x in states}
    m = Mdp(states, states, trans, parities)

    def lit(x):
        pos, neg = sat_names(abs(x))
        return Atom("A", f"p{pos}" if x > 0 else f"p{neg}")

    psi = [disj(lit(i), lit(-i)) for i in range(1, n + 1)]
    phi = [disj(*dict.fromkeys(lit(x) for x in cl)) for cl in cnf]
    return m, conj(*(psi + phi)), states[0]


# ---------------------------------------------------------------------------
# brute-force cross-check


def verify_verdict(m, s, f, verdict):
    """Problems reported by the brute-force oracle (raises ``oracle.SizeLimit`` when too large)."""
    from . import oracle

    if isinstance(f, str):
        f = parse(f)
    clauses = [_bind_clause(m, c) for c in clauses_of(f)]
    lassos = {}
    an = verdict.analysis
    if an is not None and an.answer:
        for k, lasso in an.nz_lassos.items():
            prod = an.products[k]
            lassos[f"NZ({k})"] = (lasso.stem, lasso.cycle, list(prod.lifted) + [prod.reach_parity], prod.mdp)
        for k, lasso in an.e_lassos.items():
            conds = an.sure + [p for p in an.exists if p.name == k]
            lassos[f"E({k})"] = (lasso.stem, lasso.cycle, conds, m)
    return oracle.cross_check(m, s, clauses, verdict.answer, lassos)
