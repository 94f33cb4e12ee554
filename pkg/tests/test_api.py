import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from artifact import QualitativeSolver, fixtures, format_mdp, synth


def test_params_round_trip():
    est = QualitativeSolver(path="streett", threads=2)
    params = est.get_params()
    assert params == {"path": "streett", "threads": 2, "cap": est.cap, "epsilon": "1/2"}
    est.set_params(path="parity")
    assert est.path == "parity"
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est


def test_not_fitted():
    with pytest.raises(NotFittedError):
        QualitativeSolver().predict([("s0", "A(p1)")])


@pytest.mark.parametrize("kw", [{"path": "magic"}, {"threads": 0}, {"cap": 0}, {"epsilon": "1"}, {"epsilon": "0"}])
def test_bad_params(kw):
    with pytest.raises(ValueError):
        QualitativeSolver(**kw).fit(fixtures.fig1())


def test_fit_accepts_text_and_rejects_other():
    est = QualitativeSolver().fit(format_mdp(fixtures.fig1()))
    assert est.conditions_ == ["p1", "p2"]
    with pytest.raises(TypeError):
        QualitativeSolver().fit(42)


def test_predict():
    est = QualitativeSolver().fit(fixtures.fig1())
    y = est.predict([("s0", "NZ(p1) & NZ(p2)"), ("s1", "A(p2)"), ("s0", "A(p1)")])
    assert y.dtype == bool
    assert np.array_equal(y, [True, False, True])
    assert est.predict(("s0", "A(p1)")).tolist() == [True]


def test_decide_and_synthesize():
    est = QualitativeSolver().fit(fixtures.fig4())
    v = est.decide("s", "A(p1) & AS(p2)")
    assert v.answer and v.path in ("poly", "parity", "streett")
    sigma = est.synthesize("s", "A(p1) & AS(p2)")
    assert isinstance(sigma, synth.GlobalStrategy)
    with pytest.raises(synth.NotSatisfiable):
        est.synthesize("s", "A(p2)")


def test_bad_query_shape():
    est = QualitativeSolver().fit(fixtures.fig1())
    with pytest.raises(ValueError):
        est.predict([("s0", "A(p1)", "extra")])
