import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact import fixtures, generators
from artifact.model import UnboundCondition, resolve_parity
from artifact.oracle import chain_check, det_memoryless_strategies
from artifact.qpl import (
    QUANTIFIERS,
    And,
    Atom,
    Clause,
    ClauseBlowup,
    Not,
    Or,
    QplSyntaxError,
    atoms,
    bind,
    clause_value,
    evaluate,
    parse,
    pretty,
    to_dnf_clauses,
    to_negation_free,
)

from .conftest import seeds

NAMES = [f"p{i}" for i in range(1, 6)]


def formulas(names=NAMES, max_leaves=12):
    atom = st.builds(Atom, st.sampled_from(QUANTIFIERS), st.sampled_from(names))
    return st.recursive(
        atom,
        lambda sub: st.one_of(
            st.builds(Not, sub),
            st.lists(sub, min_size=2, max_size=3).map(lambda xs: And(tuple(xs))),
            st.lists(sub, min_size=2, max_size=3).map(lambda xs: Or(tuple(xs))),
        ),
        max_leaves=max_leaves,
    )


def _no_not(f):
    if isinstance(f, Not):
        return False
    if isinstance(f, Atom):
        return True
    return all(_no_not(c) for c in f.children)


def test_parse_conjunction():
    assert parse("NZ(p1) & NZ(p2)") == And((Atom("NZ", "p1"), Atom("NZ", "p2")))


def test_parse_single_atom():
    assert parse("A(p)") == Atom("A", "p")


def test_parse_negated_conjunction_roundtrip():
    f = parse("!(A(p1) & A(p2))")
    assert f == Not(And((Atom("A", "p1"), Atom("A", "p2"))))
    assert parse(pretty(f)) == f


def test_precedence():
    f = parse("!A(a) & E(b) | NZ(c)")
    assert f == Or((And((Not(Atom("A", "a")), Atom("E", "b"))), Atom("NZ", "c")))


def test_syntax_error_offsets():
    with pytest.raises(QplSyntaxError) as exc:
        parse("A(p) & ")
    assert exc.value.offset == 7
    with pytest.raises(QplSyntaxError) as exc:
        parse("A(p) $ E(q)")
    assert exc.value.offset == 5
    with pytest.raises(QplSyntaxError) as exc:
        parse("é A(p)")
    assert exc.value.offset == 0
    with pytest.raises(QplSyntaxError):
        parse("B(p)")


def test_unknown_name_reported_at_bind_time():
    f = parse("A(nope)")
    with pytest.raises(UnboundCondition):
        bind(f, fixtures.fig1())


def test_negation_free_double_negation_example():
    f = to_negation_free(parse("!(A(p1) & A(p2))"))
    assert f == Or((Atom("E", "p1~"), Atom("E", "p2~")))


def test_negation_free_fixpoint():
    f = parse("A(p1) & (AS(p2) | E(p3))")
    assert to_negation_free(f) == f


def test_double_negation_adds_two_dualizations():
    assert to_negation_free(parse("!!AS(p)")) == Atom("AS", "p~~")


@given(seeds)
def test_double_dual_preserves_satisfaction(seed):
    m = generators.random_mdp(seed, states=4, conditions=1, priorities=5)
    p, pp = resolve_parity(m, "p1"), resolve_parity(m, "p1~~")
    st0 = next(det_memoryless_strategies(m))
    succ = lambda u: m.post(u, st0[u])
    for q in QUANTIFIERS:
        assert chain_check(0, succ, p.prio.__getitem__, q) == chain_check(0, succ, pp.prio.__getitem__, q)


def test_dnf_distribution_step():
    cl = to_dnf_clauses(parse("A(p1) & (AS(p2) | E(p3))"))
    assert cl == [Clause(A={"p1"}, AS={"p2"}), Clause(A={"p1"}, E={"p3"})]


def test_dnf_single_conjunction():
    assert to_dnf_clauses(parse("A(p) & NZ(q) & A(p)")) == [Clause(A={"p"}, NZ={"q"})]


def test_dnf_subsumption():
    assert to_dnf_clauses(parse("A(p) | (A(p) & E(q))")) == [Clause(A={"p"})]


def test_dnf_cap():
    f = parse(" & ".join(f"(A(a{i}) | E(a{i}))" for i in range(8)))
    with pytest.raises(ClauseBlowup):
        to_dnf_clauses(f, cap=100)
    assert len(to_dnf_clauses(f, cap=256)) == 256


def _dnf_equivalent(f):
    clauses = to_dnf_clauses(f)
    ats = atoms(f)
    assert len(ats) <= 10
    for bits in itertools.product((False, True), repeat=len(ats)):
        truth = dict(zip(ats, bits))
        get = lambda a: truth.get(a, False)
        assert evaluate(f, get) == any(clause_value(c, get) for c in clauses)


def test_random_8_atom_formula_dnf_truth_table():
    import random

    rng = random.Random(8)
    ats = [Atom(rng.choice(QUANTIFIERS), f"x{i}") for i in range(8)]
    f = Or((And((ats[0], Or((ats[1], ats[2])), ats[3])), And((Or((ats[4], ats[5])), Or((ats[6], ats[7])))), And((ats[1], ats[6]))))
    assert len(atoms(f)) == 8
    _dnf_equivalent(f)


@given(formulas())
def test_negation_free_has_no_not(f):
    assert _no_not(to_negation_free(f))


@given(formulas(names=[f"q{i}" for i in range(10)]))
def test_dnf_equivalent_to_negation_free_form(f):
    g = to_negation_free(f)
    if len(atoms(g)) <= 10:
        _dnf_equivalent(g)


@given(formulas())
def test_pretty_parse_identity(f):
    text = pretty(f)
    assert pretty(parse(text)) == text
    assert parse(text) == f


@given(formulas())
def test_negation_semantics_on_atoms(f):
    # pushing a negation in twice returns the double-dual of every atom
    g = to_negation_free(Not(Not(f)))
    h = to_negation_free(f)
    assert [a.quantifier for a in atoms(g)] == [a.quantifier for a in atoms(h)]
    assert all(a.name == b.name + "~~" for a, b in zip(atoms(g), atoms(h)))


def test_clause_json_roundtrip():
    c = Clause(A={"p"}, AS={"q~"}, NZ={"r"}, E=set())
    assert Clause.from_json(c.to_json()) == c
