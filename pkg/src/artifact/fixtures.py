"""Small hand-made MDPs used in examples, tests and the acceptance suite."""

from __future__ import annotations

from fractions import Fraction

from .model import Mdp

HALF = Fraction(1, 2)


def _build(prios, edges, names=None):
    """``prios``: state -> tuple of priorities; ``edges``: (s, a) -> {t: p} or t."""
    states = list(prios)
    k = len(next(iter(prios.values())))
    names = names or [f"p{i + 1}" for i in range(k)]
    acts = sorted({a for (_, a) in edges})
    trans = {key: (val if isinstance(val, dict) else {val: 1}) for key, val in edges.items()}
    parities = {n: {s: prios[s][i] for s in states} for i, n in enumerate(names)}
    return Mdp(states, acts, trans, parities)


def fig1():
    """Randomization needed for NZ(p1) & NZ(p2) at s0."""
    return _build(
        {"s0": (0, 0), "s1": (0, 1), "s2": (1, 0)},
        {("s0", "a"): "s1", ("s0", "b"): "s2", ("s1", "a"): "s1", ("s2", "b"): "s2"},
    )


def fig2():
    """Both A(p) and !A(p) hold at s."""
    return _build(
        {"s": (0,), "L": (1,), "R": (0,)},
        {("s", "a"): "L", ("s", "b"): "R", ("L", "a"): "L", ("R", "b"): "R"},
        names=["p"],
    )


def fig3():
    """A Type I EC with priorities 1, 2, 4.

    The back edge ``Rt -b-> s`` makes the carrier strongly connected.
    """
    return _build(
        {"s": (1,), "L": (2,), "Rt": (4,)},
        {
            ("s", "b"): "L",
            ("L", "a"): "s",
            ("s", "a"): {"s": HALF, "Rt": HALF},
            ("Rt", "a"): "Rt",
            ("Rt", "b"): "s",
        },
        names=["p"],
    )


def fig4():
    """Type II EC: A(p1) & AS(p2) at s."""
    return _build(
        {"s": (0, 0), "t22": (2, 2), "t11": (1, 1), "t05": (0, 5), "t21": (2, 1)},
        {
            ("t22", "a"): "s",
            ("s", "b"): "t11",
            ("t11", "a"): {"t22": HALF, "s": HALF},
            ("s", "a"): "t05",
            ("t05", "a"): {"s": HALF, "t21": HALF},
            ("t21", "a"): "s",
        },
    )


def fig5():
    """Finite memory is needed at s for the sure part of a Type I EC."""
    return _build(
        {"s": (1, 1), "u44": (4, 4), "u33": (3, 3), "u43": (4, 3), "u23": (2, 3)},
        {
            ("s", "a"): {"u44": HALF, "u33": HALF},
            ("s", "b"): {"u43": HALF, "s": HALF},
            ("s", "c"): "u23",
            ("u44", "a"): "s",
            ("u33", "a"): "s",
            ("u43", "a"): "s",
            ("u23", "a"): "s",
        },
    )


def fig6():
    """Randomization or memory needed for AS(p1) & AS(p2)."""
    return _build(
        {"x": (1, 2), "y": (0, 0), "z": (2, 1)},
        {("x", "a"): "y", ("y", "a"): "x", ("y", "b"): "z", ("z", "a"): "y"},
    )


def fig7():
    """Type III EC for A(p1) & AS(p2) & NZ(p3) from s."""
    return _build(
        {"s": (1, 1, 1), "q": (2, 2, 1), "r": (1, 1, 1), "w": (2, 2, 2)},
        {
            ("s", "a"): "q",
            ("q", "a"): "q",
            ("s", "b"): "r",
            ("r", "a"): {"s": HALF, "w": HALF},
            ("w", "a"): "s",
        },
    )


def fig8():
    """Randomized finite memory needed for AS(p1) & E(p2)."""
    return _build(
        {"s0": (1, 2), "s1": (0, 1)},
        {("s0", "a"): "s1", ("s1", "b"): "s0", ("s1", "a"): "s1"},
    )


FIXTURES = {
    "fig1": (fig1, "s0"),
    "fig2": (fig2, "s"),
    "fig3": (fig3, "s"),
    "fig4": (fig4, "s"),
    "fig5": (fig5, "s"),
    "fig6": (fig6, "y"),
    "fig7": (fig7, "s"),
    "fig8": (fig8, "s0"),
}
