"""Reference numpy implementations of the batched kernels."""

import numpy as np


def bracket_batch(c, X, Y):
    """Row-wise [X_n, Y_n] for stacks of coefficient vectors."""
    return np.einsum("ni,nj,ijk->nk", X, Y, c, optimize=True)


def connection_batch(G, X, Y):
    """Row-wise nabla_{X_n} Y_n from the connection tensor G[i, j, k]."""
    return np.einsum("ni,nj,ijk->nk", X, Y, G, optimize=True)


def curvature_batch(c, G, P, X, Y):
    """Row-wise R(x, y; y, x) for a left-invariant metric with connection tensor G."""
    a = connection_batch(G, Y, Y)
    b = connection_batch(G, X, Y)
    z = bracket_batch(c, X, Y)
    v = connection_batch(G, X, a) - connection_batch(G, Y, b) - connection_batch(G, z, Y)
    return np.einsum("nk,kl,nl->n", v, P, X, optimize=True)
