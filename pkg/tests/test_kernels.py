import os
import subprocess
import sys

import numpy as np
import pytest

from cohomlab import _pykernels, kernels
from cohomlab.catalog import load_scenario
from cohomlab.curvature_oracle import LeftInvariantMetric

try:
    from cohomlab import _ckernels
except ImportError:
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def _inputs(name, n=200, seed=3):
    A = load_scenario(name).algebra
    g = np.random.default_rng(seed)
    w = g.uniform(0.5, 2.0, A.dim)
    m = LeftInvariantMetric.diagonal(A, w)
    c = np.ascontiguousarray(A.c, dtype=float)
    return c, np.ascontiguousarray(m.gamma), np.diag(w), g.standard_normal((n, A.dim)), g.standard_normal((n, A.dim))


@needs_ext
@pytest.mark.parametrize("name", ["su2-berger", "so4-stiefel", "so5-two-block", "son-circle"])
def test_compiled_matches_numpy(name):
    c, G, P, X, Y = _inputs(name)
    for a, b in [
        (_pykernels.bracket_batch(c, X, Y), _ckernels.bracket_batch(c, X, Y)),
        (_pykernels.connection_batch(G, X, Y), _ckernels.connection_batch(G, X, Y)),
        (_pykernels.curvature_batch(c, G, P, X, Y), _ckernels.curvature_batch(c, G, P, X, Y)),
    ]:
        assert np.allclose(np.asarray(b), a, rtol=1e-12, atol=1e-12)


def test_dispatch_accepts_single_rows():
    c, G, P, X, Y = _inputs("su2-berger", n=1)
    out = kernels.bracket_batch(c, X[0], Y[0])
    assert np.allclose(out[0], np.einsum("i,j,ijk->k", X[0], Y[0], c))


def test_bracket_of_basis():
    c = load_scenario("su2-berger").algebra.c
    out = kernels.bracket_batch(c, np.eye(3), np.roll(np.eye(3), -1, axis=0))
    assert np.allclose(out, c[[0, 1, 2], [1, 2, 0]])


def test_backend_reported():
    import cohomlab

    assert cohomlab.BACKEND in ("cython", "python")
    assert cohomlab.BACKEND == kernels.BACKEND


def test_pure_env_selects_fallback():
    env = dict(os.environ, COHOMLAB_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import cohomlab; print(cohomlab.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@needs_ext
def test_default_selects_compiled():
    env = {k: v for k, v in os.environ.items() if k != "COHOMLAB_PURE"}
    out = subprocess.run([sys.executable, "-c", "import cohomlab; print(cohomlab.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "cython"
