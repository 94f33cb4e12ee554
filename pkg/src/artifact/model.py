"""Finite MDPs with exact rational probabilities, parity maps and sub-MDPs.

States and actions are interned to dense integer indices; every algorithm
works on indices and the names are kept only for reporting and I/O.
"""

from __future__ import annotations

import re
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


class MdpError(ValueError):
    """Base class for model-level errors."""


Violation = namedtuple("Violation", "kind state action detail")


class InvalidMdp(MdpError):
    """Raised by :func:`validate`; ``violations`` lists every broken invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = ", ".join(f"{v.kind}({v.state},{v.action}): {v.detail}" for v in self.violations[:5])
        more = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
        super().__init__(f"invalid MDP: {lines}{more}")


class DeadlockedState(MdpError):
    def __init__(self, state):
        self.state = state
        super().__init__(f"state {state!r} has no action staying inside the carrier")


class UnboundCondition(MdpError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown parity condition {name!r}")


class MdpParseError(MdpError):
    def __init__(self, message, line):
        self.line = line
        super().__init__(f"line {line}: {message}")


DUAL_SUFFIX = "~"


@dataclass(frozen=True)
class ParityMap:
    """Priority per state (indexed by state id) for one named condition."""

    name: str
    prio: tuple

    def __post_init__(self):
        object.__setattr__(self, "prio", tuple(int(p) for p in self.prio))
        if any(p < 0 for p in self.prio):
            raise MdpError(f"parity {self.name!r} has a negative priority")

    def __getitem__(self, s):
        return self.prio[s]

    def __len__(self):
        return len(self.prio)

    def dual(self):
        """The complementary condition: every priority shifted up by one."""
        return ParityMap(self.name + DUAL_SUFFIX, tuple(p + 1 for p in self.prio))

    def max_over(self, states):
        return max(self.prio[s] for s in states)

    def satisfied_by(self, inf_states):
        """Max-even acceptance on a set of states seen infinitely often."""
        return self.max_over(inf_states) % 2 == 0


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    raise MdpError(f"probability {x!r} is not an exact rational")


class Mdp:
    """Finite MDP ``(S, Act, Pr)``.

    ``trans`` maps ``(state_name, action_name)`` to ``{successor_name: prob}``;
    probabilities must be exact (``Fraction``, ``int`` or ``"num/den"``).
    ``parities`` maps condition names to ``{state_name: priority}`` or to a
    :class:`ParityMap` over indices.  Construction validates unless
    ``check=False``; use :func:`validate` for a full violation report.
    """

    def __init__(self, states, actions, trans, parities=None, *, check=True):
        self.states = tuple(states)
        self.actions = tuple(actions)
        if len(set(self.states)) != len(self.states):
            raise MdpError("duplicate state identifiers")
        if len(set(self.actions)) != len(self.actions):
            raise MdpError("duplicate action identifiers")
        self._sidx = {s: i for i, s in enumerate(self.states)}
        self._aidx = {a: i for i, a in enumerate(self.actions)}
        dist = {}
        for (s, a), d in trans.items():
            si, ai = self.state_index(s), self.action_index(a)
            dist[(si, ai)] = {self.state_index(t): _as_fraction(p) for t, p in d.items()}
        self._dist = dist
        acts = [[] for _ in self.states]
        for si, ai in sorted(dist):
            acts[si].append(ai)
        self._acts = tuple(tuple(a) for a in acts)
        self._post = {k: frozenset(t for t, p in d.items() if p > 0) for k, d in dist.items()}
        self.parities = {}
        for name, pm in (parities or {}).items():
            if isinstance(pm, ParityMap):
                prio = pm.prio
            else:
                missing = [s for s in self.states if s not in pm]
                if missing:
                    raise MdpError(f"parity {name!r} undefined on {missing[0]!r}")
                prio = tuple(pm[s] for s in self.states)
            if len(prio) != len(self.states):
                raise MdpError(f"parity {name!r} has wrong length")
            self.parities[name] = ParityMap(name, prio)
        self.carrier = frozenset(range(len(self.states)))
        if check:
            validate(self)

    # the view protocol shared with SubMdp
    @property
    def base(self):
        return self

    def acts(self, s):
        return self._acts[s]

    def post(self, s, a):
        return self._post[(s, a)]

    def dist(self, s, a):
        return self._dist[(s, a)]

    def state_index(self, s):
        if isinstance(s, int) and not isinstance(s, bool) and 0 <= s < len(self.states) and s not in self._sidx:
            return s
        try:
            return self._sidx[s]
        except KeyError:
            raise MdpError(f"unknown state {s!r}") from None

    def action_index(self, a):
        if isinstance(a, int) and not isinstance(a, bool) and 0 <= a < len(self.actions) and a not in self._aidx:
            return a
        try:
            return self._aidx[a]
        except KeyError:
            raise MdpError(f"unknown action {a!r}") from None

    def ids(self, *names):
        """Frozen set of state indices for the given names."""
        return frozenset(self.state_index(n) for n in names)

    def names(self, states):
        return sorted(self.states[s] for s in states)

    def parity(self, name):
        return resolve_parity(self, name)

    def __repr__(self):
        return f"Mdp({len(self.states)} states, {len(self.actions)} actions, parities={sorted(self.parities)})"


class SubMdp:
    """A closed sub-MDP: a carrier and per-state enabled actions staying inside."""

    def __init__(self, base, carrier, acts):
        self.base = base.base
        self.carrier = frozenset(carrier)
        self._acts = {s: tuple(sorted(acts[s])) for s in self.carrier}

    @property
    def states(self):
        return self.base.states

    @property
    def actions(self):
        return self.base.actions

    @property
    def parities(self):
        return self.base.parities

    def acts(self, s):
        return self._acts[s]

    def post(self, s, a):
        return self.base.post(s, a)

    def dist(self, s, a):
        return self.base.dist(s, a)

    def state_index(self, s):
        return self.base.state_index(s)

    def ids(self, *names):
        return self.base.ids(*names)

    def names(self, states):
        return self.base.names(states)

    def parity(self, name):
        return resolve_parity(self.base, name)

    def __len__(self):
        return len(self.carrier)

    def __repr__(self):
        return f"SubMdp({self.base.names(self.carrier)})"


@dataclass(frozen=True)
class EndComponent:
    """Closed, strongly connected sub-MDP given by a carrier and an action map."""

    carrier: frozenset
    acts: tuple  # sorted ((state, frozenset(actions)), ...)

    @classmethod
    def make(cls, carrier, acts: Mapping):
        carrier = frozenset(carrier)
        return cls(carrier, tuple(sorted((s, frozenset(acts[s])) for s in carrier)))

    def action_map(self):
        return dict(self.acts)

    def __contains__(self, s):
        return s in self.carrier

    def __len__(self):
        return len(self.carrier)

    def view(self, m):
        return SubMdp(m, self.carrier, self.action_map())


def validate(m):
    """Return normally iff every MDP invariant holds, else raise :class:`InvalidMdp`."""
    bad = []
    for s in range(len(m.states)):
        if not m.acts(s):
            bad.append(Violation("EmptyActionSet", m.states[s], None, "no enabled action"))
    for (s, a), d in sorted(m._dist.items()):
        sname, aname = m.states[s], m.actions[a]
        for t, p in d.items():
            if p <= 0:
                bad.append(Violation("ZeroProbabilityEdge", sname, aname, f"{m.states[t]}={p}"))
        total = sum(d.values(), Fraction(0))
        if total != 1:
            bad.append(Violation("DistributionSumMismatch", sname, aname, f"sum={total}"))
        if not any(p > 0 for p in d.values()) and total == 1:
            bad.append(Violation("ZeroProbabilityEdge", sname, aname, "empty support"))
    if bad:
        raise InvalidMdp(bad)


def resolve_parity(m, name):
    """Bind a condition name; trailing ``~`` marks dualize the base condition."""
    base = name
    k = 0
    while base.endswith(DUAL_SUFFIX):
        base = base[: -len(DUAL_SUFFIX)]
        k += 1
    base_mdp = m.base
    if base not in base_mdp.parities:
        raise UnboundCondition(name)
    pm = base_mdp.parities[base]
    for _ in range(k):
        pm = pm.dual()
    return pm


def restrict(m, C):
    """Restriction to ``C``: keep exactly the actions with ``Post(s,a) ⊆ C``."""
    C = frozenset(C)
    if not C:
        raise MdpError("restriction to an empty set")
    if not C <= m.carrier:
        raise MdpError("restriction carrier is not a subset of the states")
    acts = {}
    for s in sorted(C):
        keep = [a for a in m.acts(s) if m.post(s, a) <= C]
        if not keep:
            raise DeadlockedState(m.states[s])
        acts[s] = keep
    return SubMdp(m, C, acts)


def prune(m, keep):
    """Largest closed sub-MDP inside ``keep``; may be empty.

    States are dropped while they have no action staying inside the current
    set.  The removed states are exactly those from which the environment can
    force leaving ``keep``.
    """
    cur = set(keep) & m.carrier
    pred = {}
    live = {}
    for s in cur:
        for a in m.acts(s):
            if m.post(s, a) <= cur:
                live.setdefault(s, set()).add(a)
                for t in m.post(s, a):
                    pred.setdefault(t, []).append((s, a))
    queue = [s for s in cur if s not in live]
    removed = set()
    while queue:
        t = queue.pop()
        if t in removed:
            continue
        removed.add(t)
        for s, a in pred.get(t, ()):
            if s in removed:
                continue
            acts = live[s]
            if a in acts:
                acts.discard(a)
                if not acts:
                    queue.append(s)
    carrier = cur - removed
    return SubMdp(m, carrier, {s: live[s] for s in carrier})


ProductResult = namedtuple("ProductResult", "mdp reach_parity lifted lift")

REACH_PARITY = "reach"


def reach_to_parity_product(m, R, conditions=()):
    """Two copies of ``m``: copy 2 is entered right after ``R`` is visited.

    Returns the product MDP, the parity ``(s,i) ↦ i``, the input conditions
    lifted componentwise, and the lift ``s ↦ index of (s,1)``.
    """
    R = frozenset(R)
    base = m.base
    carrier = sorted(m.carrier)
    names = [f"{base.states[s]}@{i}" for i in (1, 2) for s in carrier]
    idx = {(s, i): k for k, (i, s) in enumerate((i, s) for i in (1, 2) for s in carrier)}
    trans = {}
    for i in (1, 2):
        for s in carrier:
            nxt = 2 if (i == 2 or s in R) else 1
            for a in m.acts(s):
                trans[(names[idx[(s, i)]], base.actions[a])] = {
                    names[idx[(t, nxt)]]: p for t, p in m.dist(s, a).items()
                }
    used_actions = sorted({a for s in carrier for a in m.acts(s)})
    prio_reach = [0] * len(names)
    for (s, i), k in idx.items():
        prio_reach[k] = i
    name = REACH_PARITY
    while name in base.parities:
        name = "_" + name
    parities = {name: ParityMap(name, prio_reach)}
    lifted = []
    for pm in list(conditions):
        prio = [0] * len(names)
        for (s, i), k in idx.items():
            prio[k] = pm.prio[s]
        lifted.append(ParityMap(pm.name, prio))
    for pname, pm in base.parities.items():
        if pname not in parities:
            prio = [0] * len(names)
            for (s, i), k in idx.items():
                prio[k] = pm.prio[s]
            parities.setdefault(pname, ParityMap(pname, prio))
    product = Mdp(names, [base.actions[a] for a in used_actions], trans, parities)
    lift = {s: idx[(s, 1)] for s in carrier}
    return ProductResult(product, parities[name], lifted, lift)


# ---------------------------------------------------------------------------
# text format

_ID = r"[A-Za-z0-9_][A-Za-z0-9_.@\-]*"
_ID_RE = re.compile(rf"^{_ID}$")
_ENTRY_RE = re.compile(rf"^({_ID})=(\d+)(?:/(\d+))?$")


def parse_mdp(text, *, check=True):
    """Parse the line-oriented MDP format.

    ::

        mdp
        states: s0 s1
        actions: a b
        parity p1: s0=0 s1=1
        trans s0 a: s1=1/2 s0=1/2
        trans s1 a: s1=1
    """
    states = actions = None
    parities = {}
    trans = {}
    where = {}
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_header:
            if line != "mdp":
                raise MdpParseError("expected 'mdp' header", lineno)
            seen_header = True
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise MdpParseError(f"missing ':' in {line!r}", lineno)
        words = head.split()
        items = body.split()
        if words == ["states"]:
            states = _ids(items, lineno)
        elif words == ["actions"]:
            actions = _ids(items, lineno)
        elif len(words) == 2 and words[0] == "parity":
            name = words[1]
            if not _ID_RE.match(name):
                raise MdpParseError(f"bad condition name {name!r}", lineno)
            if name in parities:
                raise MdpParseError(f"duplicate parity {name!r}", lineno)
            prio = {}
            for it in items:
                mt = _ENTRY_RE.match(it)
                if not mt or mt.group(3) is not None:
                    raise MdpParseError(f"bad priority entry {it!r}", lineno)
                prio[mt.group(1)] = int(mt.group(2))
            parities[name] = prio
        elif len(words) == 3 and words[0] == "trans":
            key = (words[1], words[2])
            if key in trans:
                raise MdpParseError(f"duplicate transition {key}", lineno)
            d = {}
            for it in items:
                mt = _ENTRY_RE.match(it)
                if not mt:
                    raise MdpParseError(f"bad probability entry {it!r}", lineno)
                num, den = int(mt.group(2)), int(mt.group(3) or 1)
                if den == 0:
                    raise MdpParseError(f"zero denominator in {it!r}", lineno)
                if mt.group(1) in d:
                    raise MdpParseError(f"successor listed twice in {it!r}", lineno)
                d[mt.group(1)] = Fraction(num, den)
            if not d:
                raise MdpParseError("empty distribution", lineno)
            trans[key] = d
            where[key] = lineno
        else:
            raise MdpParseError(f"unrecognised line {line!r}", lineno)
    if not seen_header:
        raise MdpParseError("expected 'mdp' header", 1)
    if states is None or actions is None:
        raise MdpParseError("missing 'states:' or 'actions:' line", 1)
    known_s, known_a = set(states), set(actions)
    for (s, a), d in trans.items():
        for x in [s, *d]:
            if x not in known_s:
                raise MdpParseError(f"unknown state {x!r}", where[(s, a)])
        if a not in known_a:
            raise MdpParseError(f"unknown action {a!r}", where[(s, a)])
    try:
        return Mdp(states, actions, trans, parities, check=check)
    except InvalidMdp:
        raise
    except MdpError as exc:
        raise MdpParseError(str(exc), 0) from None


def _ids(items, lineno):
    for it in items:
        if not _ID_RE.match(it):
            raise MdpParseError(f"bad identifier {it!r}", lineno)
    if not items:
        raise MdpParseError("empty identifier list", lineno)
    return items


def format_mdp(m):
    """Inverse of :func:`parse_mdp` (canonical ordering)."""
    base = m.base
    out = ["mdp", "states: " + " ".join(base.states), "actions: " + " ".join(base.actions)]
    for name in sorted(base.parities):
        pm = base.parities[name]
        out.append(f"parity {name}: " + " ".join(f"{s}={pm.prio[i]}" for i, s in enumerate(base.states)))
    for s in range(len(base.states)):
        for a in base.acts(s):
            d = base.dist(s, a)
            body = " ".join(f"{base.states[t]}={_fmt(p)}" for t, p in sorted(d.items()))
            out.append(f"trans {base.states[s]} {base.actions[a]}: {body}")
    return "\n".join(out) + "\n"


def _fmt(p):
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def state_set(m, states: Iterable):
    """Accept names or indices, return a frozenset of indices."""
    return frozenset(m.state_index(s) for s in states)
