"""Independent curvature computations used to validate the closed formulas.

Three routes are provided:

* left-invariant metrics on G through the Koszul formula;
* G-invariant metrics on G/H through the submersion G -> G/H (O'Neill);
* metrics dt^2 + g_phi(t) on I x G/H through the hypersurface decomposition
  of I x G (Gauss, Codazzi and Riccati equations) followed by O'Neill.

A finite-difference chart oracle in exponential coordinates gives a fourth,
formula-free check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import DimensionError, DomainError
from .lie_core import BlockDecomposition, LieAlgebra


@dataclass(frozen=True)
class LeftInvariantMetric:
    algebra: LieAlgebra
    P: np.ndarray

    def __post_init__(self):
        P = np.array(self.P, dtype=float)
        n = self.algebra.dim
        if P.shape != (n, n):
            raise DimensionError(f"metric matrix must be {n}x{n}")
        if np.max(np.abs(P - P.T), initial=0.0) > 1e-14:
            raise ValueError("metric matrix must be symmetric")
        if n and np.linalg.eigvalsh(P)[0] <= 0:
            raise ValueError("metric matrix must be positive definite")
        P.setflags(write=False)
        object.__setattr__(self, "P", P)

    @classmethod
    def diagonal(cls, algebra: LieAlgebra, weights) -> "LeftInvariantMetric":
        return cls(algebra, np.diag(np.asarray(weights, dtype=float)))

    @cached_property
    def gamma(self) -> np.ndarray:
        """G[i, j, :] = nabla_{e_i} e_j."""
        c, P = self.algebra.c, self.P
        cP = np.einsum("ijk,kl->ijl", c, P)  # <[e_i, e_j], e_l>
        w = cP - np.transpose(cP, (2, 0, 1)) + np.transpose(cP, (1, 2, 0))
        return 0.5 * np.einsum("kl,ijl->ijk", np.linalg.inv(P), w)

    def inner(self, u, v):
        return np.einsum("...i,ij,...j->...", u, self.P, v)

    def norm2(self, u):
        return self.inner(u, u)


def koszul_connection(m: LeftInvariantMetric, x, y) -> np.ndarray:
    """nabla_x y for left-invariant fields."""
    x, y = m.algebra._vec(x), m.algebra._vec(y)
    return np.einsum("...i,...j,ijk->...k", x, y, m.gamma)


def left_invariant_curvature(m: LeftInvariantMetric, x, y):
    """R(x, y; y, x) with the convention R(x, y) = [nabla_x, nabla_y] - nabla_[x,y]."""
    x, y = m.algebra._vec(x), m.algebra._vec(y)
    if x.ndim == 1 and y.ndim == 1:
        return float(kernels.curvature_batch(m.algebra.c, m.gamma, m.P, x, y)[0])
    X, Y = np.broadcast_arrays(x, y)
    shape = X.shape[:-1]
    vals = kernels.curvature_batch(m.algebra.c, m.gamma, m.P, X.reshape(-1, X.shape[-1]), Y.reshape(-1, Y.shape[-1]))
    return vals.reshape(shape)


def block_weights(d: BlockDecomposition, phi) -> np.ndarray:
    """Diagonal metric weights: phi_i on block m_i, 1 on h and on unused indices."""
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if phi.shape[0] != d.k:
        raise DimensionError(f"need one weight per m-block ({d.k}), got {phi.shape[0]}")
    if np.any(~np.isfinite(phi)) or np.any(phi <= 0):
        raise DomainError("block weights must be finite and positive")
    w = np.ones(d.parent.dim)
    for i, idx in enumerate(d.m_blocks):
        w[list(idx)] = phi[i]
    return w


def _h_sq(d: BlockDecomposition, z):
    h = list(d.h_indices)
    if not h:
        return np.zeros(z.shape[:-1])
    return np.sum(z[..., h] ** 2, axis=-1)


def _check_in_m(d: BlockDecomposition, *vs):
    out = [i for i in range(d.parent.dim) if i not in set(d.m_indices)]
    if not out:
        return
    for v in vs:
        if np.max(np.abs(np.asarray(v)[..., out]), initial=0.0) > 0.0:
            raise DomainError("vectors must lie in m (no h or unused components)")


def homogeneous_curvature(d: BlockDecomposition, phi, x, y):
    """R(x, y; y, x) on G/H with the G-invariant metric of the block weights phi."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    _check_in_m(d, x, y)
    m = LeftInvariantMetric.diagonal(d.parent, block_weights(d, phi))
    z = d.parent.bracket(x, y)
    return left_invariant_curvature(m, x, y) + 0.75 * _h_sq(d, z)


def _diag_gamma(c, p):
    """Connection tensor for the diagonal metric p (cheaper than the general route)."""
    cP = c * p[None, None, :]
    w = cP - np.transpose(cP, (2, 0, 1)) + np.transpose(cP, (1, 2, 0))
    return 0.5 * w / p[None, None, :]


def gauss_codazzi_curvature(M, t, c, x, y):
    """R(c d_t + x, y; y, c d_t + x) for dt^2 + g_phi(t), assembled from the slices.

    ``M`` must provide ``decomposition``, ``interval``, ``weight_jet(t)`` (full
    diagonal p, p', p'' over all basis indices) and ``near_breakpoint(t)``.
    """
    d = M.decomposition
    a, b = M.interval
    if not a < t < b:
        raise DomainError(f"t = {t} is not interior to ({a}, {b})")
    if M.near_breakpoint(t):
        raise DomainError(f"t = {t} is a profile breakpoint")
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    _check_in_m(d, x, y)
    A = d.parent
    p, dp, d2p = M.weight_jet(t)
    G = _diag_gamma(A.c, p)
    S = 0.5 * dp / p
    dS = 0.5 * (d2p / p - (dp / p) ** 2)

    X, Y = np.broadcast_arrays(np.atleast_2d(x), np.atleast_2d(y))
    X = np.ascontiguousarray(X, dtype=float)
    Y = np.ascontiguousarray(Y, dtype=float)
    slice_ = kernels.curvature_batch(A.c, G, np.diag(p), X, Y)

    ip = lambda u, v: np.sum(u * p * v, axis=-1)  # noqa: E731
    Sx, Sy = S * X, S * Y
    second = ip(Sx, X) * ip(Sy, Y) - ip(Sx, Y) ** 2
    # (nabla_u S) v = nabla_u (S v) - S nabla_u v
    nySx = kernels.connection_batch(G, Y, Sx) - S * kernels.connection_batch(G, Y, X)
    nxSy = kernels.connection_batch(G, X, Sy) - S * kernels.connection_batch(G, X, Y)
    codazzi = ip(nySx - nxSy, Y)
    riccati = -ip((dS + S * S) * Y, Y)

    z = kernels.bracket_batch(A.c, X, Y)
    val = slice_ - second + 2.0 * c * codazzi + c * c * riccati + 0.75 * _h_sq(d, z)
    if np.ndim(x) == 1 and np.ndim(y) == 1:
        return float(val[0])
    return val


# finite-difference chart oracle


def _dexp_frame(A: LieAlgebra, u, terms: int = 20) -> np.ndarray:
    """J(u) = sum_k (-ad_u)^k / (k+1)!, the left-trivialized differential of exp at u."""
    ad = -A.ad(u)
    J = np.eye(A.dim)
    term = np.eye(A.dim)
    for k in range(1, terms):
        term = term @ ad / (k + 1)
        J = J + term
    return J


def _christoffel_fd(metric, z, h):
    n = z.size
    g = metric(z)
    dg = np.empty((n, n, n))  # dg[c, a, b] = d_c g_ab
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        dg[k] = (metric(z + e) - metric(z - e)) / (2 * h)
    gi = np.linalg.inv(g)
    # Gamma^a_{bc} = 1/2 g^{ad} (d_b g_dc + d_c g_db - d_d g_bc)
    low = np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0)) - dg  # [d, b, c]
    return 0.5 * np.einsum("ad,dbc->abc", gi, low)


def riemann_fd(metric, z0, h: float = 1e-4) -> np.ndarray:
    """R[a, b, c, d] = <R(d_c, d_d) d_b, d_a> at z0 by nested central differences."""
    z0 = np.asarray(z0, dtype=float)
    n = z0.size
    Gam = _christoffel_fd(metric, z0, h)
    dGam = np.empty((n, n, n, n))  # dGam[e, a, b, c] = d_e Gamma^a_{bc}
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        dGam[k] = (_christoffel_fd(metric, z0 + e, h) - _christoffel_fd(metric, z0 - e, h)) / (2 * h)
    # R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb} + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
    Rup = (
        np.einsum("cadb->abcd", dGam)
        - np.einsum("dacb->abcd", dGam)
        + np.einsum("ace,edb->abcd", Gam, Gam)
        - np.einsum("ade,ecb->abcd", Gam, Gam)
    )
    return np.einsum("fa,abcd->fbcd", metric(z0), Rup)


def chart_metric(A: LieAlgebra, P) -> callable:
    """Left-invariant metric P written in exponential coordinates around e."""
    P = np.asarray(P, dtype=float)

    def g(u):
        J = _dexp_frame(A, u)
        return J.T @ P @ J

    return g


def chart_curvature_fd(A: LieAlgebra, P, x, y, h: float = 1e-4) -> float:
    """R(x, y; y, x) of a left-invariant metric from a finite-difference Riemann tensor."""
    R = riemann_fd(chart_metric(A, P), np.zeros(A.dim), h)
    return float(np.einsum("a,b,c,d,abcd->", x, y, x, y, R))


def chart_connection_fd(A: LieAlgebra, P, x, y, h: float = 1e-4) -> np.ndarray:
    """nabla_x y for left-invariant fields from finite-difference Christoffel symbols.

    The field y has coordinates J(u)^{-1} y in the chart, so
    nabla_x y = D_x(J^{-1} y) + Gamma(x, y) at u = 0.
    """
    g = chart_metric(A, P)
    Gam = _christoffel_fd(g, np.zeros(A.dim), h)
    field = lambda u: np.linalg.solve(_dexp_frame(A, u), y)  # noqa: E731
    deriv = (field(h * np.asarray(x)) - field(-h * np.asarray(x))) / (2 * h)
    return deriv + np.einsum("abc,b,c->a", Gam, x, y)


def cohom1_curvature_fd(M, t, c, x, y, h: float = 1e-4) -> float:
    """R(c d_t + x, y; y, c d_t + x) for a cohomogeneity-one metric by finite differences.

    Works on I x G in coordinates (t, u) and adds the O'Neill term for G -> G/H.
    """
    d = M.decomposition
    A = d.parent

    def g(z):
        p = M.weight_jet(z[0])[0]
        J = _dexp_frame(A, z[1:])
        out = np.zeros((A.dim + 1, A.dim + 1))
        out[0, 0] = 1.0
        out[1:, 1:] = J.T @ (p[:, None] * J)
        return out

    R = riemann_fd(g, np.concatenate([[t], np.zeros(A.dim)]), h)
    X = np.concatenate([[c], x])
    Y = np.concatenate([[0.0], y])
    val = float(np.einsum("a,b,c,d,abcd->", X, Y, X, Y, R))
    return val + 0.75 * float(_h_sq(d, A.bracket(x, y)))
