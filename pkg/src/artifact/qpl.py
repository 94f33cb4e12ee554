"""Qualitative parity logic: formulas, parser, negation-free form and DNF clauses.

Grammar::

    formula := disj
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := '!' unary | atom | '(' formula ')'
    atom    := ('A' | 'AS' | 'NZ' | 'E') '(' name ')'

A condition name may carry trailing ``~`` marks, each denoting one
dualization (all priorities shifted up by one).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import DUAL_SUFFIX, resolve_parity

QUANTIFIERS = ("A", "AS", "NZ", "E")
_NEGATED = {"A": "E", "E": "A", "AS": "NZ", "NZ": "AS"}
DEFAULT_CLAUSE_CAP = 4096


class QplSyntaxError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class ClauseBlowup(RuntimeError):
    def __init__(self, count, cap):
        super().__init__(f"DNF has more than {cap} clauses (reached {count})")
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class Atom:
    quantifier: str
    name: str

    def __post_init__(self):
        if self.quantifier not in QUANTIFIERS:
            raise ValueError(f"unknown quantifier {self.quantifier!r}")
        if not _NAME_RE.fullmatch(self.name):
            raise ValueError(f"bad condition name {self.name!r}")


@dataclass(frozen=True)
class Not:
    child: object


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("And needs at least two children; use conj()")


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children; use disj()")


def conj(*fs):
    return fs[0] if len(fs) == 1 else And(fs)


def disj(*fs):
    return fs[0] if len(fs) == 1 else Or(fs)


def atoms(f):
    """Atoms of ``f`` in first-occurrence order."""
    out = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.setdefault(g, None)
        elif isinstance(g, Not):
            stack.append(g.child)
        else:
            stack.extend(reversed(g.children))
    return list(out)


def evaluate(f, truth):
    """Propositional value of ``f`` under ``truth`` (a mapping or a callable on atoms)."""
    get = truth if callable(truth) else truth.__getitem__
    if isinstance(f, Atom):
        return bool(get(f))
    if isinstance(f, Not):
        return not evaluate(f.child, truth)
    if isinstance(f, And):
        return all(evaluate(c, truth) for c in f.children)
    return any(evaluate(c, truth) for c in f.children)


# ---------------------------------------------------------------------------
# printing and parsing


def pretty(f):
    if isinstance(f, Atom):
        return f"{f.quantifier}({f.name})"
    if isinstance(f, Not):
        inner = pretty(f.child)
        return "!" + (inner if isinstance(f.child, (Atom, Not)) else f"({inner})")
    sep = " & " if isinstance(f, And) else " | "
    parts = []
    for c in f.children:
        s = pretty(c)
        if isinstance(c, (And, Or)):
            s = f"({s})"
        parts.append(s)
    return sep.join(parts)


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*~*")
_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*~*)|(?P<op>[()&|!]))")


def _tokenize(text):
    data = text.encode("utf-8") if isinstance(text, str) else bytes(text)
    src = data.decode("utf-8")
    # byte offsets: build a char -> byte map once
    offs = [0]
    for ch in src:
        offs.append(offs[-1] + len(ch.encode("utf-8")))
    pos = 0
    toks = []
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN_RE.match(src, pos)
        if not m or m.end() == pos:
            raise QplSyntaxError(f"unexpected character {src[pos]!r}", offs[pos])
        kind = "name" if m.group("name") else "op"
        start = m.start(kind)
        toks.append((kind, m.group(kind), offs[start]))
        pos = m.end()
    toks.append(("end", None, offs[len(src)]))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise QplSyntaxError(f"expected {value!r}, found {found}", tok[2])
        self.i += 1
        return tok

    def formula(self):
        parts = [self.conj()]
        while self.peek()[1] == "|":
            self.take()
            parts.append(self.conj())
        return disj(*parts)

    def conj(self):
        parts = [self.unary()]
        while self.peek()[1] == "&":
            self.take()
            parts.append(self.unary())
        return conj(*parts)

    def unary(self):
        kind, val, off = self.peek()
        if val == "!":
            self.take()
            return Not(self.unary())
        if val == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if kind == "name":
            if val not in QUANTIFIERS:
                raise QplSyntaxError(f"expected a quantifier (A, AS, NZ, E), found {val!r}", off)
            self.take()
            self.take("(")
            k, name, noff = self.take()
            if k != "name":
                raise QplSyntaxError("expected a condition name", noff)
            self.take(")")
            return Atom(val, name)
        found = "end of input" if kind == "end" else repr(val)
        raise QplSyntaxError(f"expected a formula, found {found}", off)


def parse(text):
    """Parse a formula; raises :class:`QplSyntaxError` with a byte offset."""
    p = _Parser(text)
    f = p.formula()
    kind, val, off = p.peek()
    if kind != "end":
        raise QplSyntaxError(f"unexpected {val!r}", off)
    return f


def bind(f, m):
    """Resolve every condition name against MDP ``m``; returns ``{name: ParityMap}``."""
    out = {}
    for a in atoms(f):
        out[a.name] = resolve_parity(m, a.name)
    return out


# ---------------------------------------------------------------------------
# normal forms


def _negate(f):
    if isinstance(f, Atom):
        return Atom(_NEGATED[f.quantifier], f.name + DUAL_SUFFIX)
    if isinstance(f, Not):
        # double negation keeps both dualizations: !!AS(p) becomes AS(p~~)
        return _negate(_negate(f.child))
    if isinstance(f, And):
        return Or(tuple(_negate(c) for c in f.children))
    return And(tuple(_negate(c) for c in f.children))


def to_negation_free(f):
    """Push negations into atoms via the quantifier dualities and De Morgan."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return _negate(f.child)
    children = tuple(to_negation_free(c) for c in f.children)
    return type(f)(children)


@dataclass(frozen=True)
class Clause:
    """Conjunction of atoms grouped by quantifier."""

    A: frozenset = frozenset()
    AS: frozenset = frozenset()
    NZ: frozenset = frozenset()
    E: frozenset = frozenset()

    def __post_init__(self):
        for q in QUANTIFIERS:
            object.__setattr__(self, q, frozenset(getattr(self, q)))

    @classmethod
    def of_atoms(cls, items):
        groups = {q: set() for q in QUANTIFIERS}
        for a in items:
            groups[a.quantifier].add(a.name)
        return cls(**groups)

    def atoms(self):
        return [Atom(q, n) for q in QUANTIFIERS for n in sorted(getattr(self, q))]

    def names(self):
        return set().union(self.A, self.AS, self.NZ, self.E)

    def is_empty(self):
        return not (self.A or self.AS or self.NZ or self.E)

    def to_formula(self):
        return conj(*self.atoms())

    def __str__(self):
        return pretty(self.to_formula()) if not self.is_empty() else "true"

    def to_json(self):
        return {q: sorted(getattr(self, q)) for q in QUANTIFIERS}

    @classmethod
    def from_json(cls, d):
        return cls(**{q: frozenset(d.get(q, ())) for q in QUANTIFIERS})


def _minimize(clauses):
    """Drop duplicates and clauses that are supersets of another (keeps first-seen order)."""
    uniq = list(dict.fromkeys(clauses))
    out = []
    for c in uniq:
        if any(o <= c and o != c for o in uniq):
            continue
        out.append(c)
    return out


def _dnf(f, cap):
    if isinstance(f, Atom):
        return [frozenset([f])]
    if isinstance(f, Not):
        raise ValueError("formula is not negation-free")
    if isinstance(f, Or):
        acc = []
        for c in f.children:
            acc.extend(_dnf(c, cap))
            acc = _minimize(acc)
            if len(acc) > cap:
                raise ClauseBlowup(len(acc), cap)
        return acc
    acc = [frozenset()]
    for c in f.children:
        part = _dnf(c, cap)
        nxt = []
        for x in acc:
            for y in part:
                nxt.append(x | y)
        acc = _minimize(nxt)
        if len(acc) > cap:
            raise ClauseBlowup(len(acc), cap)
    return acc


def to_dnf_clauses(f, cap=DEFAULT_CLAUSE_CAP):
    """Clauses whose disjunction is propositionally equivalent to negation-free ``f``."""
    return [Clause.of_atoms(c) for c in _dnf(f, cap)]


def clauses_of(f, cap=DEFAULT_CLAUSE_CAP):
    """Negation-free form followed by DNF extraction."""
    return to_dnf_clauses(to_negation_free(f), cap)


def clause_value(clause, truth):
    return all(evaluate(a, truth) for a in clause.atoms())
