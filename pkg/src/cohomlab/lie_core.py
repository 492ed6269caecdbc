"""Compact Lie algebras in a Q-orthonormal basis.

An algebra is stored as its structure constants ``c[i, j, k]`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k``. The basis is always orthonormal for the
biinvariant inner product Q, so Q is the Euclidean dot product on coefficient
vectors and biinvariance is equivalent to total antisymmetry of ``c``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .errors import DimensionError

TOL = 1e-12


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    c: np.ndarray
    name: str = "algebra"

    def __post_init__(self):
        c = _frozen(self.c)
        if c.shape != (self.dim,) * 3:
            raise DimensionError(f"structure constants must have shape {(self.dim,) * 3}, got {c.shape}")
        object.__setattr__(self, "c", c)

    def _vec(self, x) -> np.ndarray:
        v = np.asarray(x, dtype=float)
        if v.shape[-1:] != (self.dim,):
            raise DimensionError(f"expected vectors of length {self.dim}, got shape {v.shape}")
        return v

    def basis(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e

    def bracket(self, x, y) -> np.ndarray:
        """[x, y]; broadcasts over leading axes."""
        x, y = self._vec(x), self._vec(y)
        return np.einsum("...i,...j,ijk->...k", x, y, self.c)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad_x, so that ``ad(x) @ y == bracket(x, y)``."""
        x = self._vec(x)
        return np.einsum("i,ijk->kj", x, self.c)

    def ad_matrices(self) -> np.ndarray:
        """Stack of ad(e_i) for every basis vector."""
        return np.transpose(self.c, (0, 2, 1))

    def center(self, tol: float = 1e-9) -> np.ndarray:
        """Orthonormal basis of z(g) as rows."""
        # v is central iff ad(e_i) v = 0 for all i, i.e. c[i, j, k] v_j = 0.
        stacked = self.ad_matrices().reshape(self.dim * self.dim, self.dim)
        return nullspace(stacked, tol)

    def is_abelian(self) -> bool:
        return bool(np.max(np.abs(self.c), initial=0.0) == 0.0)

    def is_semisimple(self) -> bool:
        return self.center().shape[0] == 0

    def to_json(self, blocks: Sequence[Sequence[int]] | None = None) -> dict:
        doc = {
            "name": self.name,
            "dim": self.dim,
            "c": [repr(float(v)) for v in self.c.ravel(order="C")],
        }
        doc["blocks"] = [list(map(int, b)) for b in blocks] if blocks is not None else []
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "LieAlgebra":
        dim = int(doc["dim"])
        flat = np.array([float(v) for v in doc["c"]], dtype=float)
        if flat.size != dim**3:
            raise DimensionError(f"'c' must hold dim**3 = {dim ** 3} entries, got {flat.size}")
        return cls(dim, flat.reshape(dim, dim, dim), doc.get("name", "algebra"))


def bracket(A: LieAlgebra, x, y) -> np.ndarray:
    return A.bracket(x, y)


def adjoint_exp(A: LieAlgebra, x) -> np.ndarray:
    """Ad_{exp(x)} as the matrix exponential of ad_x."""
    x = A._vec(x)
    if not np.all(np.isfinite(x)):
        raise ValueError("adjoint_exp requires a finite vector")
    return expm(A.ad(x))


def nullspace(M, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal kernel basis of ``M`` (rows of the result).

    Singular values below ``tol`` times the largest singular value are treated
    as zero. A zero matrix has full kernel.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    n = M.shape[1]
    if M.size == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(M, full_matrices=True)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return np.eye(n)
    rank = int(np.sum(s > tol * smax))
    return vt[rank:].copy()


def orthonormal_span(vectors, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (rows) of the span of ``vectors`` (rows)."""
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    if V.size == 0:
        return np.zeros((0, V.shape[-1] if V.ndim == 2 else 0))
    _, s, vt = np.linalg.svd(V, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((0, V.shape[1]))
    rank = int(np.sum(s > tol * s[0]))
    return vt[:rank].copy()


def orthogonal_complement(vectors, dim: int, within=None, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the complement of span(vectors) inside ``within``.

    ``within`` is an orthonormal row basis of the ambient subspace (default:
    the whole space).
    """
    W = np.eye(dim) if within is None else np.atleast_2d(np.asarray(within, dtype=float))
    if W.shape[0] == 0:
        return np.zeros((0, dim))
    V = np.atleast_2d(np.asarray(vectors, dtype=float)).reshape(-1, dim)
    if V.shape[0] == 0:
        return W.copy()
    coeffs = nullspace(V @ W.T, tol)
    return coeffs @ W


@dataclass(frozen=True)
class AlgebraDiagnostics:
    jacobi: float
    antisymmetry: float
    biinvariance: float

    @property
    def passed(self) -> bool:
        return max(self.jacobi, self.antisymmetry, self.biinvariance) < TOL


def check_algebra(A: LieAlgebra) -> AlgebraDiagnostics:
    c = A.c
    antisym = float(np.max(np.abs(c + np.transpose(c, (1, 0, 2))), initial=0.0))
    # total antisymmetry in (i, j, k): c[i,j,k] = -c[i,k,j]
    biinv = float(np.max(np.abs(c + np.transpose(c, (0, 2, 1))), initial=0.0))
    # J[i,j,l,k] = sum_m c[i,j,m] c[m,l,k] summed cyclically over (i,j,l)
    t = np.einsum("ijm,mlk->ijlk", c, c)
    jac = t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
    return AlgebraDiagnostics(
        jacobi=float(np.max(np.abs(jac), initial=0.0)),
        antisymmetry=antisym,
        biinvariance=biinv,
    )


@dataclass(frozen=True)
class BlockDecomposition:
    """Ordered Q-orthogonal blocks of basis indices.

    Block 0 is the isotropy algebra h; blocks 1..k are the modules m_i.
    ``flags[i]`` records whether ``m_0 + ... + m_i`` is a subalgebra.
    """

    parent: LieAlgebra
    blocks: tuple
    flags: tuple = ()

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not self.flags:
            object.__setattr__(self, "flags", tuple(self.prefix_is_subalgebra(i) for i in range(len(blocks))))
        else:
            object.__setattr__(self, "flags", tuple(bool(f) for f in self.flags))
        if len(self.flags) != len(blocks):
            raise ValueError("one flag per block is required")

    @property
    def k(self) -> int:
        return len(self.blocks) - 1

    @property
    def h_indices(self) -> tuple:
        return self.blocks[0]

    @property
    def m_blocks(self) -> tuple:
        return self.blocks[1:]

    @property
    def m_indices(self) -> tuple:
        return tuple(i for b in self.blocks[1:] for i in b)

    def used_indices(self) -> tuple:
        return tuple(i for b in self.blocks for i in b)

    def projector(self, indices) -> np.ndarray:
        P = np.zeros((self.parent.dim, self.parent.dim))
        idx = list(indices)
        P[idx, idx] = 1.0
        return P

    def block_projector(self, i: int) -> np.ndarray:
        return self.projector(self.blocks[i])

    def mask(self, indices) -> np.ndarray:
        m = np.zeros(self.parent.dim)
        m[list(indices)] = 1.0
        return m

    def block_of_index(self) -> np.ndarray:
        """Block label per basis index (-1 for unused indices)."""
        lab = -np.ones(self.parent.dim, dtype=int)
        for b, idx in enumerate(self.blocks):
            lab[list(idx)] = b
        return lab

    def prefix_is_subalgebra(self, i: int) -> bool:
        idx = [j for b in self.blocks[: i + 1] for j in b]
        return _closed(self.parent, idx)

    def validate(self) -> dict:
        """Residuals of the decomposition invariants (all must be < 1e-12)."""
        A = self.parent
        used = self.used_indices()
        if len(set(used)) != len(used) or any(i < 0 or i >= A.dim for i in used):
            raise ValueError("blocks must be disjoint subsets of the basis")
        res = {"h_closed": _closure_residual(A, self.blocks[0])}
        inv = 0.0
        for i in range(1, len(self.blocks)):
            inv = max(inv, _invariance_residual(A, self.blocks[0], self.blocks[i]))
        res["ad_h_invariance"] = inv
        flag_res = 0.0
        for i, f in enumerate(self.flags):
            if f:
                idx = [j for b in self.blocks[: i + 1] for j in b]
                flag_res = max(flag_res, _closure_residual(A, idx))
        res["flagged_prefixes"] = flag_res
        return res

    def is_valid(self) -> bool:
        return max(self.validate().values()) < TOL


def _closure_residual(A: LieAlgebra, idx) -> float:
    idx = list(idx)
    if not idx:
        return 0.0
    out = [j for j in range(A.dim) if j not in set(idx)]
    if not out:
        return 0.0
    return float(np.max(np.abs(A.c[np.ix_(idx, idx, out)]), initial=0.0))


def _closed(A: LieAlgebra, idx) -> bool:
    return _closure_residual(A, idx) < TOL


def _invariance_residual(A: LieAlgebra, h, m) -> float:
    h, m = list(h), list(m)
    if not h or not m:
        return 0.0
    out = [j for j in range(A.dim) if j not in set(m)]
    if not out:
        return 0.0
    return float(np.max(np.abs(A.c[np.ix_(h, m, out)]), initial=0.0))


@dataclass(frozen=True)
class BiquotientSpec:
    """Subalgebra h of g + g given by pairs (u_a, w_a), acting by (h1, h2).g = h1 g h2^-1."""

    parent: LieAlgebra
    u: np.ndarray
    w: np.ndarray
    center_basis: np.ndarray = field(default=None)

    def __post_init__(self):
        n = self.parent.dim
        u = _frozen(np.reshape(self.u, (-1, n)))
        w = _frozen(np.reshape(self.w, (-1, n)))
        if u.shape != w.shape:
            raise DimensionError("u and w must list the same number of vectors")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)
        if self.center_basis is None:
            object.__setattr__(self, "center_basis", _frozen(self.parent.center()))
        else:
            object.__setattr__(self, "center_basis", _frozen(np.reshape(self.center_basis, (-1, n))))

    @property
    def dim_h(self) -> int:
        return self.u.shape[0]

    @classmethod
    def two_sided(cls, A: LieAlgebra, left=(), right=()) -> "BiquotientSpec":
        """L x R acting by l g r^-1, for subalgebras spanned by the given rows."""
        n = A.dim
        left = np.reshape(np.asarray(left, dtype=float), (-1, n))
        right = np.reshape(np.asarray(right, dtype=float), (-1, n))
        u = np.vstack([left, np.zeros_like(right)])
        w = np.vstack([np.zeros_like(left), right])
        return cls(A, u, w)

    def closure_residual(self) -> float:
        """Distance of the pairwise brackets from span{(u_a, w_a)}."""
        if self.dim_h == 0:
            return 0.0
        A = self.parent
        pairs = np.hstack([self.u, self.w])
        basis = orthonormal_span(pairs)
        worst = 0.0
        for a in range(self.dim_h):
            for b in range(self.dim_h):
                v = np.concatenate([A.bracket(self.u[a], self.u[b]), A.bracket(self.w[a], self.w[b])])
                r = v - basis.T @ (basis @ v)
                worst = max(worst, float(np.max(np.abs(r))))
        return worst

    def center_residual(self) -> float:
        A = self.parent
        if self.center_basis.shape[0] == 0:
            return 0.0
        return float(np.max(np.abs(np.einsum("ai,jik->ajk", self.center_basis, A.c)), initial=0.0))


def algebra_document(A: LieAlgebra, blocks=None) -> str:
    return json.dumps(A.to_json(blocks), indent=2)
