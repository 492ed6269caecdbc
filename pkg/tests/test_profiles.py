import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cohomlab.errors import DomainError
from cohomlab.profiles import (
    BallProfile,
    Blend,
    CheegerCone,
    CheegerDeformed,
    Constant,
    ExpSaturation,
    LinearCombo,
    Piece,
    Poly,
    PowerOfPoly,
    Reflected,
    Scaled,
    Shifted,
    Sine,
    Square,
    WarpProfile,
    form_from_json,
    hermite_quintic,
    onset_step,
    smoothstep,
)

FORMS = [
    Constant(0.7),
    CheegerCone(1.3),
    Poly((0.5, 0.2, -0.1, 0.01), 1.0),
    PowerOfPoly(Poly((0.2, 0.3, -0.01), 1.0), 0.1),
    Sine(2.0, 0.5),
    ExpSaturation(0.5, 0.2, 1.7, 1.0),
    BallProfile(Sine(2.0, 0.5), 0.25, 0.5),
    CheegerDeformed(Poly((0.5, 0.1, 0.02), 1.0), 0.3),
    LinearCombo(((1.0, Sine(1.0, 0.3)), (-0.5, Poly((0.0, 0.0, 0.0, 0.01), 1.0)))),
    Blend(Sine(1.0, 0.3), Poly((0.3, 0.1), 1.0), 1.2, 2.0),
    Blend(Sine(1.0, 0.3), LinearCombo(((1.0, Sine(1.0, 0.3)), (1.0, Poly((0.0, 0.0, 0.05), 1.2)))), 1.2, 2.0, "onset"),
    Scaled(Sine(1.0, 0.3), 2.5),
    Shifted(CheegerCone(1.0), -0.5),
    Square(Sine(1.0, 0.3)),
    Reflected(CheegerCone(1.0), 4.0),
]


def _fd(form, t, h=1e-5):
    f = lambda s: float(form.jet(np.array([s]))[0][0])  # noqa: E731
    d1 = (f(t + h) - f(t - h)) / (2 * h)
    d2 = (f(t + h) - 2 * f(t) + f(t - h)) / h**2
    return d1, d2


@pytest.mark.parametrize("form", FORMS, ids=lambda f: f.kind)
@given(st.floats(1.05, 2.95))
def test_jets_match_finite_differences(form, t):
    _, fp, fpp = (float(v[0]) for v in form.jet(np.array([t])))
    d1, d2 = _fd(form, t)
    assert abs(fp - d1) <= 1e-6 * (1 + abs(fp))
    assert abs(fpp - d2) <= 2e-4 * (1 + abs(fpp))


@pytest.mark.parametrize("form", FORMS, ids=lambda f: f.kind)
def test_json_round_trip_exact(form):
    doc = json.loads(json.dumps(form.to_json()))
    back = form_from_json(doc)
    t = np.linspace(1.05, 2.95, 17)
    for a, b in zip(form.jet(t), back.jet(t)):
        assert np.array_equal(np.broadcast_to(a, t.shape), np.broadcast_to(b, t.shape))


def test_json_numbers_are_strings():
    doc = Poly((0.1, 1 / 3), 0.5).to_json()
    assert doc["coeffs"] == ["0.1", repr(1 / 3)] and doc["origin"] == "0.5"


def test_unknown_form_kind():
    with pytest.raises(ValueError):
        form_from_json({"kind": "Nope"})


def test_cheeger_cone_log_derivative():
    t = np.linspace(0.1, 5, 50)
    f, fp, _ = CheegerCone(2.0).jet(t)
    assert np.allclose(fp / f, CheegerCone(2.0).log_derivative(t), rtol=1e-14)


def test_steps():
    s = np.linspace(0, 1, 101)
    S, dS, d2S = smoothstep(s)
    assert S[0] == 0 and S[-1] == 1 and dS[0] == dS[-1] == 0 and d2S[0] == d2S[-1] == 0
    assert np.all(np.diff(S) >= 0)
    S, dS, d2S = onset_step(s)
    assert onset_step(-0.5) == (0.0, 0.0, 0.0)
    assert S[0] == 0 and S[-1] == 1 and dS[-1] == 0 and d2S[-1] == 0
    # s^2 S(s) is convex, which keeps a one-sided blend below the lower curve's f''
    q = 2 * S + 4 * s * dS + s * s * d2S
    assert np.all(q >= 0)


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3), st.lists(st.floats(-1, 1), min_size=3, max_size=3),
       st.floats(0.2, 3))
def test_hermite_quintic_matches_jets(left, right, L):
    p = hermite_quintic(1.0, 1.0 + L, left, right)
    a = np.array(p.jet(np.array([1.0])))[:, 0]
    b = np.array(p.jet(np.array([1.0 + L])))[:, 0]
    assert np.allclose(a, left, atol=1e-9) and np.allclose(b, right, atol=1e-9)


def _two_piece():
    f = CheegerCone(1.0)
    t1 = 2.0
    h = hermite_quintic(t1, 3.0, [float(v) for v in f.jet(t1)], [0.95, 0.0, 0.0])
    return WarpProfile([(1.0, t1, f), (t1, 3.0, h), (3.0, 4.0, Constant(0.95))])


def test_profile_c2_and_continuity():
    p = _two_piece()
    assert p.is_c2()
    assert np.max(p.continuity_residuals()) < 1e-12
    assert p.breakpoints == (2.0, 3.0)


def test_profile_detects_jump():
    p = WarpProfile([(1.0, 2.0, Constant(1.0)), (2.0, 3.0, Constant(1.1))])
    assert not p.is_c2()


def test_profile_domain_checked():
    p = _two_piece()
    with pytest.raises(DomainError):
        p.jet(0.5)
    with pytest.raises(DomainError):
        p.jet(np.nan)


def test_profile_contiguity_checked():
    with pytest.raises(ValueError):
        WarpProfile([(1.0, 2.0, Constant(1.0)), (2.5, 3.0, Constant(1.0))])


def test_profile_scalar_and_vector():
    p = _two_piece()
    v = p.jet(np.array([1.5, 2.5, 3.5]))
    for i, t in enumerate((1.5, 2.5, 3.5)):
        assert p.jet(t) == tuple(float(a[i]) for a in v)


def test_profile_json_round_trip():
    p = _two_piece()
    q = WarpProfile.from_json(json.loads(json.dumps(p.to_json())))
    t = np.linspace(1, 4, 31)
    for a, b in zip(p.jet(t), q.jet(t)):
        assert np.array_equal(a, b)


def test_restrict_and_map():
    p = _two_piece().restrict(1.5, 3.5)
    assert p.domain == (1.5, 3.5) and len(p.pieces) == 3
    q = p.map_forms(lambda f: Scaled(f, 2.0))
    assert q(2.5) == pytest.approx(2 * p(2.5), abs=1e-15)


def test_piece_is_frozen():
    pc = Piece(0.0, 1.0, Constant(1.0))
    with pytest.raises(Exception):
        pc.lo = 2.0
