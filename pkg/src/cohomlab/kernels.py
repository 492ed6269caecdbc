"""Batched numeric kernels; the compiled extension is used when it is importable.

Set COHOMLAB_PURE=1 to force the numpy implementation.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("COHOMLAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def _rows(a):
    return np.ascontiguousarray(np.atleast_2d(np.asarray(a, dtype=float)))


def _tensor(a):
    return np.ascontiguousarray(np.asarray(a, dtype=float))


def bracket_batch(c, X, Y):
    return _impl.bracket_batch(_tensor(c), _rows(X), _rows(Y))


def connection_batch(G, X, Y):
    return _impl.connection_batch(_tensor(G), _rows(X), _rows(Y))


def curvature_batch(c, G, P, X, Y):
    return _impl.curvature_batch(_tensor(c), _tensor(G), _tensor(P), _rows(X), _rows(Y))
