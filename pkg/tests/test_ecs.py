import itertools

from hypothesis import given
from hypothesis import strategies as st

from artifact import ecs, fixtures, generators
from artifact.graphalg import mec_decomposition
from artifact.model import EndComponent, Mdp, restrict
from artifact.oracle import (
    brute_ecs,
    brute_lasso,
    brute_max_reach,
    chain_check,
    det_memoryless_strategies,
    is_ec,
    reachable,
)

from .conftest import seeds


def _whole(m):
    (C,) = mec_decomposition(m)
    assert C.carrier == m.carrier
    return C


def _valid(m, C):
    assert is_ec(m, C.carrier, C.action_map())


def _ec(car, acts):
    return EndComponent.make(car, acts)


# ---------------------------------------------------------------------------
# c_max_even


def test_c_max_even_fig3():
    m = fixtures.fig3()
    assert m.names(ecs.c_max_even(_whole(m), m.parity("p"))) == ["L", "Rt"]


def test_c_max_even_all_even_is_whole_carrier():
    m = Mdp(["x", "y"], ["a"], {("x", "a"): {"y": 1}, ("y", "a"): {"x": 1}}, {"p": {"x": 0, "y": 2}})
    assert ecs.c_max_even(_whole(m), m.parity("p")) == m.carrier


def test_c_max_even_fig6():
    m = fixtures.fig6()
    assert m.names(ecs.c_max_even(_whole(m), m.parity("p1"))) == ["z"]


# ---------------------------------------------------------------------------
# Type I


def test_type_one_fig3():
    m = fixtures.fig3()
    p = m.parity("p")
    res = ecs.is_type_one_for(m, _whole(m), [p], p)
    assert res.yes and res.win == m.carrier


def test_type_one_all_odd_is_empty_target():
    m = Mdp(["x"], ["a"], {("x", "a"): {"x": 1}}, {"p": {"x": 3}})
    p = m.parity("p")
    res = ecs.is_type_one_for(m, _whole(m), [p], p)
    assert not res.yes and res.reason == "empty-target"


def _type_one_lower(view, A, R):
    """Some deterministic memoryless strategy inside the EC satisfies the Type I property from every state."""
    for sigma in det_memoryless_strategies(view):
        succ = lambda u: view.post(u, sigma[u])
        ok = True
        for s in view.carrier:
            if not all(chain_check(s, succ, p.prio.__getitem__, "A") for p in A):
                ok = False
                break
            # reach R with probability one: R is reachable from every reachable state
            if not all(reachable(u, succ) & R for u in reachable(s, succ)):
                ok = False
                break
        if ok:
            return True
    return False


def _type_one_upper(view, A, R):
    v = brute_max_reach(view, R)
    return all(v[s] == 1 for s in view.carrier) and all(brute_lasso(view, s, A) for s in view.carrier)


@given(seeds)
def test_type_one_sandwich(seed):
    m = generators.random_mdp(seed, states=5, conditions=2)
    for C in mec_decomposition(m):
        view = C.view(m)
        A = [m.parity("p1"), m.parity("p2")]
        for ai in A:
            R = ecs.c_max_even(C, ai)
            res = ecs.is_type_one_for(m, C, A, ai)
            if not R:
                assert not res.yes
                continue
            if _type_one_lower(view, A, R):
                assert res.yes
            if res.yes:
                assert _type_one_upper(view, A, R)


def test_bounded_fig3():
    m = fixtures.fig3()
    p = m.parity("p")
    (C,) = ecs.max_type_one_bounded(m, [p], p, 1)
    assert C.carrier == m.carrier


def test_bounded_without_even_priorities_is_empty():
    m = Mdp(["x", "y"], ["a"], {("x", "a"): {"y": 1}, ("y", "a"): {"x": 1}}, {"p": {"x": 1, "y": 3}})
    p = m.parity("p")
    assert ecs.max_type_one_bounded(m, [p], p, 1) == []
    assert ecs.max_type_one_bounded(m, [p], p, 3) == []


def test_single_fig3_unchanged():
    m = fixtures.fig3()
    p = m.parity("p")
    assert [C.carrier for C in ecs.max_type_one_single(m, [p], p)] == [m.carrier]


def test_all_without_conditions_is_mec_decomposition():
    m = fixtures.fig7()
    assert ecs.max_type_one_all(m, []) == mec_decomposition(m)


def test_all_fig4():
    m = fixtures.fig4()
    (C,) = ecs.max_type_one_all(m, [m.parity("p1")])
    assert C.carrier == m.carrier


def _type_one_all(m, C, A):
    return all(ecs.is_type_one_for(m, C, A, ai).yes for ai in A)


@given(seeds)
def test_type_one_single_maximal_and_sound(seed):
    m = generators.random_mdp(seed, states=5, conditions=2)
    A = [m.parity("p1"), m.parity("p2")]
    fam = ecs.max_type_one_single(m, A, A[0])
    for C, D in itertools.permutations(fam, 2):
        assert not C.carrier <= D.carrier
    for C in fam:
        _valid(m, C)
        assert ecs.is_type_one_for(m, C, A, A[0]).yes


@given(seeds)
def test_type_one_all_against_ec_enumeration(seed):
    m = generators.random_mdp(seed, states=5, conditions=2)
    A = [m.parity("p1"), m.parity("p2")]
    got = ecs.max_type_one_all(m, A)
    for C in got:
        _valid(m, C)
        assert _type_one_all(m, C, A)
    covered = frozenset().union(*(C.carrier for C in got))
    for car, acts in brute_ecs(m):
        E = _ec(car, acts)
        if _type_one_all(m, E, A):
            assert any(car <= C.carrier for C in got)
        if car - covered:
            assert not _type_one_all(m, E, A)
    assert ecs.max_type_one_all(m, A[::-1]) == got


@given(seeds)
def test_type_one_union_property(seed):
    m = generators.random_mdp(seed, states=5, conditions=1)
    A = [m.parity("p1")]
    good = [(car, acts) for car, acts in brute_ecs(m) if _type_one_all(m, _ec(car, acts), A)]
    for (c1, a1), (c2, a2) in itertools.combinations(good, 2):
        if not c1 & c2:
            continue
        acts = {s: a1.get(s, frozenset()) | a2.get(s, frozenset()) for s in c1 | c2}
        if is_ec(m, c1 | c2, acts):
            assert _type_one_all(m, _ec(c1 | c2, acts), A)


# ---------------------------------------------------------------------------
# almost-sure conjunctions


def test_check_as_fig6():
    m = fixtures.fig6()
    C = _whole(m)
    res = ecs.check_as_conjunction(m, C, [m.parity("p1"), m.parity("p2")])
    assert res.yes and res.witness.carrier == m.carrier


def test_check_as_all_odd():
    m = Mdp(["x"], ["a"], {("x", "a"): {"x": 1}}, {"p": {"x": 1}})
    assert not ecs.check_as_conjunction(m, _whole(m), [m.parity("p")]).yes


def test_check_as_fig7():
    m = fixtures.fig7()
    C = next(C for C in mec_decomposition(m) if m.state_index("s") in C.carrier)
    assert m.names(C.carrier) == ["r", "s", "w"]
    assert ecs.check_as_conjunction(m, C, [m.parity(p) for p in ("p1", "p2", "p3")]).yes


def test_type_two_fig4():
    m = fixtures.fig4()
    (C,) = ecs.max_type_two(m, [m.parity("p1")], [m.parity("p2")])
    assert C.carrier == m.carrier
    w = ecs.check_as_conjunction(m, C, [m.parity("p1"), m.parity("p2")]).witness
    assert m.names(w.carrier) == ["s", "t11", "t22"]


def test_type_two_without_conditions():
    m = fixtures.fig1()
    assert ecs.max_type_two(m, [], []) == mec_decomposition(m)


def test_type_three_fig7():
    m = fixtures.fig7()
    A, AS, nz = [m.parity("p1")], [m.parity("p2")], m.parity("p3")
    S1 = ecs.sure_buechi_region(m, frozenset().union(*(C.carrier for C in ecs.max_type_two(m, A, AS))), A)
    t3 = ecs.type_three_union(restrict(m, S1), A, AS, nz)
    assert m.ids("s", "r", "w") <= t3


def test_type_three_all_odd():
    m = Mdp(["x", "y"], ["a"], {("x", "a"): {"y": 1}, ("y", "a"): {"x": 1}}, {"p": {"x": 1, "y": 3}})
    assert ecs.type_three_union(m, [], [], m.parity("p")) == frozenset()


def _good(D, conds):
    return all(max(p[s] for s in D) % 2 == 0 for p in conds)


@given(seeds)
def test_type_two_and_three_definitions(seed):
    m = generators.random_mdp(seed, states=5, conditions=3)
    A, AS, nz = [m.parity("p1")], [m.parity("p2")], m.parity("p3")
    t1 = ecs.max_type_one_all(m, A)
    t2 = ecs.max_type_two(m, A, AS)
    for C in t2:
        _valid(m, C)
        assert C in t1
        # some sub-EC is good for A and AS
        assert any(car <= C.carrier and _good(car, A + AS) for car, _ in brute_ecs(C.view(m)))
    for C in mec_decomposition(m):
        if ecs.check_as_conjunction(m, C, A + AS + [nz]).yes:
            assert ecs.check_as_conjunction(m, C, A + AS).yes
    want = frozenset().union(*(car for car, _ in brute_ecs(m) if _good(car, A + AS + [nz])))
    assert ecs.type_three_union(m, A, AS, nz) == want
    for C in mec_decomposition(m):
        for D in ecs.good_sub_ecs(m, C, A + AS + [nz]):
            _valid(m, D)


# ---------------------------------------------------------------------------
# existential conjunctions


def test_exists_fig1_no():
    m = fixtures.fig1()
    assert not ecs.exists_conjunction_parity(m, [m.parity("p1"), m.parity("p2")], m.state_index("s0")).yes


def test_exists_even_self_loop():
    m = Mdp(["x"], ["a"], {("x", "a"): {"x": 1}}, {"p": {"x": 2}})
    res = ecs.exists_conjunction_parity(m, [m.parity("p")], 0)
    assert res.yes and res.lasso.cycle == ((0, 0, 0),)


def _check_lasso(m, lasso, s, conds):
    steps = list(lasso.stem) + list(lasso.cycle)
    assert steps[0][0] == s
    for (u, a, t), nxt in zip(steps, steps[1:] + [lasso.cycle[0]]):
        assert a in m.acts(u) and t in m.post(u, a)
        assert nxt[0] == t
    assert lasso.satisfies(conds)


def test_exists_fig4():
    m = fixtures.fig4()
    conds = [m.parity("p1"), m.parity("p2")]
    s = m.state_index("s")
    res = ecs.exists_conjunction_parity(m, conds, s)
    assert res.yes
    assert m.ids("s", "t11", "t22") == res.lasso.cycle_states()
    _check_lasso(m, res.lasso, s, conds)


@given(seeds, st.integers(1, 3))
def test_exists_matches_brute_lasso(seed, k):
    m = generators.random_mdp(seed, states=6, conditions=k)
    conds = [m.parity(f"p{i + 1}") for i in range(k)]
    for s in m.carrier:
        res = ecs.exists_conjunction_parity(m, conds, s)
        assert res.yes == brute_lasso(m, s, conds)
        if res.yes:
            _check_lasso(m, res.lasso, s, conds)
