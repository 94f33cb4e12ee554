import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact import fixtures, generators
from artifact.games import (
    PLAYER1,
    PLAYER2,
    Arena,
    arena_to_dot,
    build_streett_buechi_arena,
    edge_label,
    game_of_mdp,
    solve_parity,
    solve_streett,
    solve_streett_buechi,
)
from artifact.ecs import c_max_even
from artifact.graphalg import mec_decomposition
from artifact.model import Mdp
from artifact.oracle import (
    Inconclusive,
    all_cycles_even,
    brute_parity_game,
    brute_parity_game_opponent,
    brute_streett_game,
)

from .conftest import seeds


def _closed_and_winning(arena, region, strat, prios):
    """Following ``strat`` from any region vertex stays in the region and wins every condition."""
    for v in region:
        start = (strat.initial, v)

        def succ(node):
            mem, u = node
            nxt = strat.update(mem, u)
            if arena.owner[u] == PLAYER1:
                return [(nxt, strat.choose(mem, u))]
            return [(nxt, w) for w in arena.succ[u]]

        seen, stack = {start}, [start]
        while stack:
            node = stack.pop()
            assert node[1] in region
            for x in succ(node):
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        for pr in prios:
            assert all_cycles_even(start, succ, lambda node: pr[node[1]])


def test_game_of_fig1_has_seven_vertices():
    a = game_of_mdp(fixtures.fig1())
    assert len(a) == 7
    assert sum(o == PLAYER2 for o in a.owner) == 4


def test_game_of_self_loop():
    m = Mdp(["x"], ["a"], {("x", "a"): {"x": 1}}, {"p": {"x": 0}})
    a = game_of_mdp(m)
    assert len(a) == 2 and a.succ == ((1,), (0,))


@given(seeds)
def test_game_edges_project_to_mdp_edges(seed):
    m = generators.random_mdp(seed, states=5)
    a = game_of_mdp(m)
    for v, lab in enumerate(a.labels):
        if lab[0] == "s":
            assert {a.labels[w][2] for w in a.succ[v]} == set(m.acts(lab[1]))
        else:
            _, s, act = lab
            assert {a.labels[w][1] for w in a.succ[v]} == m.post(s, act)


def test_streett_buechi_arena_fig1_size():
    m = fixtures.fig1()
    a = build_streett_buechi_arena(m, m.ids("s1"), [m.parity("p1")])
    assert len(a.core()) == 3 + 2 * 3
    assert len(a) == 9 + 3  # one player-2 choice vertex per copied pair
    assert a.buchi == {a.vertex(("s", 1))} | {v for v, lab in enumerate(a.labels) if lab[0] == "copy" and lab[3] == 0}


def test_streett_buechi_arena_target_everything():
    m = fixtures.fig1()
    a = build_streett_buechi_arena(m, m.carrier, [m.parity("p1")])
    assert len(a) == 3 and a.buchi == frozenset(range(3))
    region, _ = solve_streett_buechi(a)
    assert region == frozenset(range(3))


def test_fresh_labels_on_player_one_copies():
    m = fixtures.fig3()
    a = build_streett_buechi_arena(m, set(), [m.parity("p")])
    v = a.vertex(("copy", m.state_index("s"), m.action_index("a"), 1))
    labels = {edge_label(a, v, w) for w in a.succ[v]}
    assert len(labels) == 2


def test_fig3_streett_buechi_game_is_won_everywhere():
    m = fixtures.fig3()
    (C,) = mec_decomposition(m)
    p = m.parity("p")
    R = c_max_even(C, p)
    assert m.names(R) == ["L", "Rt"]
    a = build_streett_buechi_arena(C.view(m), R, [p])
    for method in ("streett", "parity", "auto"):
        region, strat = solve_streett_buechi(a, method=method)
        assert {lab[1] for v, lab in enumerate(a.labels) if lab[0] == "s" and v in region} == set(m.carrier)
        _closed_and_winning(a, region, strat, [a.prio(p.name), a.buchi_parity()])


def test_buechi_everywhere_without_conditions():
    a = Arena([PLAYER1, PLAYER2], [[1], [0]], buchi=[0, 1])
    assert solve_streett_buechi(a).region == {0, 1}


def test_fig2_parity_game():
    m = fixtures.fig2()
    a = game_of_mdp(m)
    region, strat = solve_parity(a, "p")
    s = a.vertex(("s", m.state_index("s")))
    assert s in region
    assert a.labels[strat[s]] == ("sa", m.state_index("s"), m.action_index("b"))
    assert region == brute_parity_game(a, "p")


def test_all_even_wins_everywhere():
    a = Arena([PLAYER1, PLAYER2, PLAYER1], [[1], [2], [0, 1]], {"p": [0, 2, 4]})
    assert solve_parity(a, "p").region == {0, 1, 2}


def test_brute_parity_even_self_loop():
    a = Arena([PLAYER1], [[0]], {"p": [2]})
    assert brute_parity_game(a, "p") == {0}


@given(seeds)
def test_parity_matches_brute_force_and_partitions(seed):
    a = generators.random_arena(seed, vertices=7, priorities=5)
    region, strat = solve_parity(a, "p1")
    assert region == brute_parity_game(a, "p1")
    assert region | brute_parity_game_opponent(a, "p1") == set(range(len(a)))
    assert not region & brute_parity_game_opponent(a, "p1")
    for v in region:
        if a.owner[v] == PLAYER1:
            assert strat[v] in region
        else:
            assert set(a.succ[v]) <= region


@given(seeds)
def test_streett_single_condition_equals_parity(seed):
    a = generators.random_arena(seed, vertices=8, priorities=6)
    want = solve_parity(a, "p1").region
    for method in ("auto", "iar", "recursive"):
        assert solve_streett(a, ["p1"], method=method).region == want


def test_fig5_game_needs_memory_for_alternation():
    # player 1 must alternate between two moves to satisfy both conditions
    a = Arena([PLAYER1, PLAYER2, PLAYER2], [[1, 2], [0], [0]], {"x": [0, 2, 1], "y": [0, 1, 2]})
    res = brute_streett_game(a, ["x", "y"])
    assert res.region == {0, 1, 2} and res.modes[0] == 2
    region, strat = solve_streett(a, ["x", "y"])
    assert region == res.region
    assert len(strat.modes()) >= 2
    _closed_and_winning(a, region, strat, [a.prio("x"), a.prio("y")])


def test_fig5_sure_conjunction_game():
    m = fixtures.fig5()
    a = game_of_mdp(m)
    region = solve_streett(a, ["p1", "p2"]).region
    s = a.vertex(("s", m.state_index("s")))
    # player 2 resolves (s, b) back to s forever, so only p1 and p2 jointly fail at s
    assert s not in region
    assert s in solve_parity(a, "p1").region


@given(seeds)
def test_streett_matches_bounded_memory_oracle(seed):
    a = generators.random_arena(seed, vertices=6, priorities=4, conditions=2, out_degree=3, even_weight=0.7)
    region, strat = solve_streett(a, ["p1", "p2"])
    assert region == solve_streett(a, ["p1", "p2"], method="recursive", strategy=False).region
    _closed_and_winning(a, region, strat, [a.prio("p1"), a.prio("p2")])
    try:
        res = brute_streett_game(a, ["p1", "p2"], memory_bound=3)
    except Inconclusive as exc:
        assert exc.lower <= region <= exc.upper
        return
    assert region == res.region


@given(seeds)
def test_streett_buechi_matches_oracle(seed):
    a = generators.random_arena(seed, vertices=6, priorities=4, conditions=1, out_degree=3, even_weight=0.6)
    import random

    rng = random.Random(seed)
    b = Arena(a.owner, a.succ, a.priorities, buchi=[v for v in range(6) if rng.random() < 0.5])
    regions = {m: solve_streett_buechi(b, method=m)[0] for m in ("streett", "parity", "auto")}
    assert len(set(regions.values())) == 1
    try:
        res = brute_streett_game(b, ["p1", b.buchi_parity()], memory_bound=3)
    except Inconclusive as exc:
        assert exc.lower <= regions["streett"] <= exc.upper
        return
    assert regions["streett"] == res.region


def test_dot_export():
    a = game_of_mdp(fixtures.fig1())
    dot = arena_to_dot(a, frozenset({0}))
    assert dot.startswith("digraph arena {") and dot.count("->") == sum(len(s) for s in a.succ)
