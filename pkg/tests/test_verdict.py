import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bargmann_pullback.verdict import NOISE_FLOOR, Certificate, Decision, Verdict, combine, sign_decision

decisions = st.sampled_from(list(Decision))


def test_regimes():
    assert sign_decision(0.0, 1.0, 1e-9) == "zero"
    assert sign_decision(1e-17, 1.0, 1e-9) == "zero"
    assert sign_decision(-5e-10, 1.0, 1e-9) == "band"
    assert sign_decision(2e-9, 1.0, 1e-9) == "pos"
    assert sign_decision(-2e-9, 1.0, 1e-9) == "neg"


def test_noise_floor_never_exceeds_tol():
    # with a tolerance below the noise floor the band is empty
    assert sign_decision(NOISE_FLOOR / 2, 1.0, 1e-16) == "pos"


@given(st.floats(-1e3, 1e3), st.floats(1e-3, 1e3), st.floats(1e-14, 1e-3))
def test_scale_invariance(value, scale, tol):
    assert sign_decision(value, scale, tol) == sign_decision(value * 8, scale * 8, tol)


@given(st.lists(decisions))
def test_combine_order(ds):
    got = combine(ds)
    if Decision.NO in ds:
        assert got is Decision.NO
    elif Decision.BOUNDARY in ds:
        assert got is Decision.BOUNDARY
    else:
        assert got is Decision.YES


def test_verdict_json():
    cert = Certificate(eigenvalues=np.array([-1.0, 0.5]), witness=[1 + 2j], violated="semidefinite",
                       extra={"margin": np.float64(0.25)})
    v = Verdict(Decision.NO, {"semidefinite": Decision.NO}, cert)
    data = json.loads(json.dumps(v.to_json()))
    assert data == {"decision": "no", "conditions": {"semidefinite": "no"},
                    "certificate": {"eigenvalues": [-1.0, 0.5], "null_basis": [], "violated": "semidefinite",
                                    "witness": [[1.0, 2.0]], "margin": 0.25}}
    assert v.no and not v.yes
    with pytest.raises(TypeError):
        bool(v)
