"""Estimator-style front end.

    >>> from artifact import QualitativeSolver, fixtures
    >>> solver = QualitativeSolver().fit(fixtures.fig1())
    >>> solver.predict([("s0", "NZ(p1) & NZ(p2)")]).tolist()
    [True]
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import decide, ecs, synth
from .model import Mdp, parse_mdp, validate
from .qpl import DEFAULT_CLAUSE_CAP, bind, parse


def check_mdp(m):
    """Accept an :class:`Mdp` or MDP source text; return a validated MDP."""
    if isinstance(m, str):
        return parse_mdp(m)
    if not isinstance(m, Mdp):
        raise TypeError(f"expected an Mdp or MDP text, got {type(m).__name__}")
    validate(m)
    return m


def check_queries(X):
    """Normalize queries to a list of ``(state, formula)`` pairs."""
    if isinstance(X, tuple) and len(X) == 2 and isinstance(X[1], str):
        X = [X]
    out = []
    for q in X:
        if len(q) != 2:
            raise ValueError(f"query {q!r} is not a (state, formula) pair")
        out.append((q[0], q[1]))
    return out


class QualitativeSolver(BaseEstimator):
    """Decide and synthesize qualitative parity objectives on one MDP.

    Parameters
    ----------
    path : {"auto", "poly", "parity", "streett"}
        Solver family for the sure part.
    threads : int
        Worker threads for clause-level parallelism.
    cap : int
        Maximal number of DNF clauses.
    epsilon : str or Fraction
        Slack of the scheduled non-zero strategies.
    """

    def __init__(self, path="auto", threads=1, cap=DEFAULT_CLAUSE_CAP, epsilon="1/2"):
        self.path = path
        self.threads = threads
        self.cap = cap
        self.epsilon = epsilon

    def _check_params(self):
        if self.path not in ecs.PATHS:
            raise ValueError(f"unknown solver path {self.path!r}")
        if int(self.threads) < 1:
            raise ValueError("threads must be positive")
        if int(self.cap) < 1:
            raise ValueError("cap must be positive")
        eps = Fraction(self.epsilon)
        if not 0 < eps < 1:
            raise ValueError("epsilon must lie strictly between 0 and 1")
        return eps

    def fit(self, X, y=None):
        """Bind the solver to MDP ``X`` (an :class:`Mdp` or its text)."""
        self._check_params()
        self.mdp_ = check_mdp(X)
        self.conditions_ = sorted(self.mdp_.parities)
        return self

    def _formula(self, f):
        f = parse(f) if isinstance(f, str) else f
        bind(f, self.mdp_)
        return f

    def decide(self, state, formula):
        """Full :class:`~artifact.decide.Verdict` for one query."""
        check_is_fitted(self, "mdp_")
        self._check_params()
        return decide.decide_formula(self.mdp_, state, self._formula(formula), self.path, threads=int(self.threads), cap=int(self.cap))

    def predict(self, X):
        """Boolean array: realizability of each ``(state, formula)`` query."""
        return np.array([self.decide(s, f).answer for s, f in check_queries(X)], dtype=bool)

    def synthesize(self, state, formula):
        """Witness strategy for a realizable query (raises ``NotSatisfiable`` otherwise)."""
        eps = self._check_params()
        v = self.decide(state, formula)
        if not v.answer:
            raise synth.NotSatisfiable(f"{formula!r} is not realizable at {state!r} ({v.reason})")
        return synth.synthesize_clause(self.mdp_, v.analysis, eps)
