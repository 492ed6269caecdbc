"""Vertical and flat-direction spaces of biquotients, torus rank and quotient Ricci bounds."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cohom1 import Cohom1Metric, _split, curvature_two_block
from .errors import DomainError, NonConstantRankError, PreconditionError
from .lie_core import BiquotientSpec, LieAlgebra, adjoint_exp, nullspace, orthogonal_complement, orthonormal_span
from .sampling import DEFAULT_SEED, parallel_map, unit_vectors

ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class QuotientContext:
    """Sample points g = exp(a) exp(b) of G together with the acting subalgebra.

    ``mode`` is ``"biquotient"`` for G//H given by pairs (u, w), or
    ``"one-sided"`` for L\\G/H, where the pairs are (l, 0) and (0, h) and the
    vertical space is reported inside m.
    """

    spec: BiquotientSpec
    points: tuple
    mode: str = "biquotient"
    m_basis: np.ndarray | None = None
    l_rows: np.ndarray | None = None
    k_rows: np.ndarray | None = None
    _ad: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def algebra(self) -> LieAlgebra:
        return self.spec.parent

    @staticmethod
    def sample_points(dim: int, n_points: int, seed: int = DEFAULT_SEED) -> tuple:
        rng = np.random.default_rng(seed)
        a = rng.uniform(-2.0, 2.0, (n_points, dim))
        b = rng.uniform(-2.0, 2.0, (n_points, dim))
        return tuple((a[i], b[i]) for i in range(n_points))

    @classmethod
    def biquotient(cls, spec: BiquotientSpec, n_points: int = 32, seed: int = DEFAULT_SEED) -> "QuotientContext":
        return cls(spec, cls.sample_points(spec.parent.dim, n_points, seed))

    @classmethod
    def one_sided(cls, A: LieAlgebra, decomposition, l_rows, k_indices=(), n_points: int = 32,
                  seed: int = DEFAULT_SEED) -> "QuotientContext":
        n = A.dim
        l_rows = np.reshape(np.asarray(l_rows, dtype=float), (-1, n))
        h_rows = np.eye(n)[list(decomposition.h_indices)]
        m_basis = np.eye(n)[list(decomposition.m_indices)]
        k_rows = np.eye(n)[list(k_indices)]
        spec = BiquotientSpec.two_sided(A, left=l_rows, right=h_rows)
        return cls(spec, cls.sample_points(n, n_points, seed), "one-sided", m_basis, l_rows, k_rows)

    def sigma(self) -> "QuotientContext":
        """The base biquotient L\\G/K, sharing the sample points."""
        if self.l_rows is None:
            raise PreconditionError("only one-sided contexts have a base biquotient")
        spec = BiquotientSpec.two_sided(self.algebra, left=self.l_rows, right=self.k_rows)
        return QuotientContext(spec, self.points)

    def with_points(self, n_points: int, seed: int = DEFAULT_SEED) -> "QuotientContext":
        return QuotientContext(self.spec, self.sample_points(self.algebra.dim, n_points, seed), self.mode,
                               self.m_basis, self.l_rows, self.k_rows)

    def ad_inverse(self, point) -> np.ndarray:
        """Ad_{g^-1} = Ad_g^T for g = exp(a) exp(b); ``point`` is an index or a pair (a, b)."""
        if isinstance(point, (int, np.integer)):
            key = int(point)
            if key not in self._ad:
                a, b = self.points[key]
                self._ad[key] = (adjoint_exp(self.algebra, a) @ adjoint_exp(self.algebra, b)).T
            return self._ad[key]
        a, b = point
        return (adjoint_exp(self.algebra, a) @ adjoint_exp(self.algebra, b)).T

    def orthogonality_residual(self) -> float:
        n = self.algebra.dim
        return max(float(np.max(np.abs(self.ad_inverse(i).T @ self.ad_inverse(i) - np.eye(n))))
                   for i in range(len(self.points)))

    def ambient(self) -> np.ndarray:
        return np.eye(self.algebra.dim) if self.m_basis is None else self.m_basis

    @property
    def expected_vertical_dim(self) -> int:
        return self.l_rows.shape[0] if self.mode == "one-sided" else self.spec.dim_h


def _full_vertical(ctx: QuotientContext, point) -> np.ndarray:
    """Rows Ad_{g^-1} u_a - w_a spanning the vertical space in g."""
    Ad = ctx.ad_inverse(point)
    return ctx.spec.u @ Ad.T - ctx.spec.w


def vertical_space(ctx: QuotientContext, point) -> np.ndarray:
    """Orthonormal rows spanning V_g; one-sided contexts return pr_m(Ad_{g^-1} l)."""
    if ctx.mode == "one-sided":
        Ad = ctx.ad_inverse(point)
        V = ctx.l_rows @ Ad.T
        P = ctx.m_basis.T @ ctx.m_basis
        return orthonormal_span(V @ P)
    return orthonormal_span(_full_vertical(ctx, point))


def is_free_at(ctx: QuotientContext, point) -> bool:
    """True when V_g has the full dimension (the action is infinitesimally free at g)."""
    return vertical_space(ctx, point).shape[0] == ctx.expected_vertical_dim


def horizontal_space(ctx: QuotientContext, point) -> np.ndarray:
    """Q-orthogonal complement of V_g (inside m for one-sided contexts)."""
    V = vertical_space(ctx, point)
    return orthogonal_complement(V, ctx.algebra.dim, within=ctx.ambient())


def _bracket_map(A: LieAlgebra, B: np.ndarray) -> np.ndarray:
    """Matrix of alpha -> ([sum_i alpha_i b_i, b_j])_j, stacked over j."""
    n = B.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    br = np.einsum("ip,jq,pqk->jki", B, B, A.c)  # [b_i, b_j]_k at [j, k, i]
    return br.reshape(n * A.dim, n)


def flat_directions(ctx: QuotientContext, point) -> np.ndarray:
    """F_g = {v in H_g : [v, H_g] = 0} as orthonormal rows."""
    H = horizontal_space(ctx, point)
    if H.shape[0] == 0:
        return H
    K = _bracket_map(ctx.algebra, H)
    alpha = nullspace(K) if np.any(K) else np.eye(H.shape[0])
    return orthonormal_span(alpha @ H) if alpha.shape[0] else np.zeros((0, ctx.algebra.dim))


def _row_reduce_nullspace(M, tol: float = 1e-10) -> list:
    """Kernel of M by Gauss-Jordan elimination with partial pivoting (list of vectors)."""
    M = [list(map(float, row)) for row in M]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    scale = max((abs(v) for row in M for v in row), default=0.0)
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        best, piv = 0.0, None
        for i in range(r, rows):
            if abs(M[i][c]) > best:
                best, piv = abs(M[i][c]), i
        if piv is None or best <= tol * max(scale, 1.0):
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [v / p for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0.0:
                fac = M[i][c]
                M[i] = [a - fac * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0.0] * cols
        v[fc] = 1.0
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc]
        basis.append(v)
    return basis


def flat_directions_bruteforce(ctx: QuotientContext, point) -> np.ndarray:
    """Independent F_g: explicit loops over basis brackets, kernel by row reduction."""
    H = horizontal_space(ctx, point)
    A = ctx.algebra
    n, dim = H.shape
    if n == 0:
        return H
    rows = []
    for j in range(n):
        for k in range(dim):
            row = []
            for i in range(n):
                s = 0.0
                for p in range(dim):
                    if H[i, p] == 0.0:
                        continue
                    for q in range(dim):
                        s += H[i, p] * H[j, q] * A.c[p, q, k]
                row.append(s)
            rows.append(row)
    alpha = _row_reduce_nullspace(rows)
    if not alpha:
        return np.zeros((0, dim))
    return orthonormal_span(np.array(alpha) @ H)


def subspace_distance(U, V) -> float:
    """Max-norm distance between the orthogonal projectors onto two row spans."""
    U = np.atleast_2d(U)
    V = np.atleast_2d(V)
    dim = max(U.shape[-1], V.shape[-1])
    PU = U.T @ U if U.size else np.zeros((dim, dim))
    PV = V.T @ V if V.size else np.zeros((dim, dim))
    return float(np.max(np.abs(PU - PV), initial=0.0))


def flat_residual(ctx: QuotientContext, point, F=None) -> float:
    """max |[v, b]| over returned flat vectors v and a basis b of H_g, plus distance of F from H_g."""
    F = flat_directions(ctx, point) if F is None else F
    H = horizontal_space(ctx, point)
    if F.shape[0] == 0:
        return 0.0
    br = np.einsum("ip,jq,pqk->ijk", F, H, ctx.algebra.c)
    outside = F - (F @ H.T) @ H
    return float(max(np.max(np.abs(br)), np.max(np.abs(outside))))


def center_horizontal_dim(ctx: QuotientContext, point) -> int:
    """dim(z(g) intersect H_g)."""
    Z = ctx.spec.center_basis
    if Z.shape[0] == 0:
        return 0
    W = _full_vertical(ctx, point)
    if ctx.mode == "one-sided":
        # H_g lies in m: also exclude the h directions
        W = np.vstack([W, np.eye(ctx.algebra.dim)[[i for i in range(ctx.algebra.dim)
                                                    if not np.any(ctx.m_basis[:, i])]]])
    if W.shape[0] == 0 or not np.any(W):
        return Z.shape[0]
    s = np.linalg.svd(Z @ W.T, compute_uv=False)
    rank = int(np.sum(s > 1e-9 * max(1.0, s[0] if s.size else 0.0)))
    return Z.shape[0] - rank


def torus_rank(ctx: QuotientContext, min_points: int = 32) -> int:
    """dim(z(g) cap H_g), required to agree at every sample point."""
    if len(ctx.points) < min_points:
        ctx = ctx.with_points(min_points)
    dims = parallel_map(lambda i: center_horizontal_dim(ctx, i), range(len(ctx.points)))
    if len(set(dims)) != 1:
        raise NonConstantRankError(f"dim(z cap H_g) varies over samples: {sorted(set(dims))}")
    return int(dims[0])


def flat_direction_rate(ctx: QuotientContext, n_points: int = 200, seed: int = DEFAULT_SEED) -> float:
    """Fraction of seeded sample points with F_g = 0."""
    c = ctx.with_points(n_points, seed)
    zero = parallel_map(lambda i: flat_directions(c, i).shape[0] == 0, range(n_points))
    return float(np.mean(zero))


def metric_horizontal_frame(M: Cohom1Metric, ctx: QuotientContext, t: float, point) -> np.ndarray:
    """g-orthonormal rows spanning the slice part {z1 + f^2 z2 : z in H^Q_g} of the horizontal space."""
    HQ = horizontal_space(ctx, point)
    p = M.weight_jet(t)[0]
    Y = HQ / p  # z1/f^2 + z2 is proportional to z1 + f^2 z2
    if Y.shape[0] == 0:
        return Y
    G = (Y * p) @ Y.T
    L = np.linalg.cholesky(G)
    return np.linalg.solve(L, Y)


def quotient_ricci_details(M: Cohom1Metric, ctx: QuotientContext, t: float, c: float = 0.0, x=None,
                           C: float | None = None, point=0, rng=None) -> dict:
    """Lower bounds for Ric_N(c d_t + x) at (t, g) for a two-block normalized metric.

    ``bound`` uses -(f f')^2 per frame vector; ``printedBound`` uses -(f' f'')^2;
    ``upstairs`` is the exact sum of the curvatures in M that O'Neill's formula
    places under Ric_N.
    """
    from .profile_builder import check_inequality

    if not M.two_block_normalized:
        raise PreconditionError("the quotient Ricci bound needs a two-block normalized metric")
    M.check_t(t)
    dim_n = 1 + ctx.m_basis.shape[0] - ctx.expected_vertical_dim if ctx.m_basis is not None else None
    C = max(dim_n or 0, 9) if C is None else C
    chk = check_inequality(M.profiles[0], C, [t])
    if not chk["passes"]:
        raise PreconditionError(f"-f f'' >= {C} f'^2 fails at t = {t} (margin {chk['maxIneq']})")
    Y = metric_horizontal_frame(M, ctx, t, point)
    if x is None:
        rng = np.random.default_rng(DEFAULT_SEED) if rng is None else rng
        coeff = rng.standard_normal(Y.shape[0])
        x = coeff @ Y if Y.shape[0] else np.zeros(M.algebra.dim)
    x = np.asarray(x, dtype=float)
    p = M.weight_jet(t)[0]
    V = vertical_space(ctx, point)
    if V.shape[0] and np.max(np.abs((V * p) @ x), initial=0.0) > 1e-10 * max(1.0, np.linalg.norm(x)):
        raise DomainError("x is not horizontal")
    f, fp, fpp = M.profiles[0].jet(float(t))
    x1, _ = _split(M, x)
    y1, _ = _split(M, Y)
    nx1 = float(x1 @ x1)
    wedge = nx1 * np.sum(y1 * y1, axis=1) - (y1 @ x1) ** 2
    radial = -f * fpp * nx1
    bound = radial - (f * fp) ** 2 * float(np.sum(wedge))
    printed = radial - (fp * fpp) ** 2 * float(np.sum(wedge))
    k = Y.shape[0]
    if k:
        X = np.broadcast_to(x, Y.shape)
        up = radial + float(np.sum(curvature_two_block(M, t, c, X, Y)))
    else:
        up = radial
    return {"t": float(t), "c": float(c), "x": x.tolist(), "k": k, "C": C, "bound": float(bound),
            "printedBound": float(printed), "upstairs": up, "floor": float((-f * fpp - k * fp * fp) * nx1)}


def quotient_ricci_bound(M: Cohom1Metric, ctx: QuotientContext, t: float, c: float = 0.0, x=None,
                         C: float | None = None, point=0, rng=None, printed: bool = False) -> float:
    d = quotient_ricci_details(M, ctx, t, c, x, C, point, rng)
    return d["printedBound"] if printed else d["bound"]


def upstairs_ricci(M: Cohom1Metric, ctx: QuotientContext, t: float, c: float, x, point) -> float:
    """R_M(d_t, x; x, d_t) + sum_i R_M(c d_t + x, y^i; y^i, c d_t + x) over a g-orthonormal frame."""
    Y = metric_horizontal_frame(M, ctx, t, point)
    f, fp, fpp = M.profiles[0].jet(float(t))
    x = np.asarray(x, dtype=float)
    x1, _ = _split(M, x)
    radial = -f * fpp * float(x1 @ x1)
    if Y.shape[0] == 0:
        return radial
    X = np.broadcast_to(x, Y.shape)
    return radial + float(np.sum(curvature_two_block(M, t, c, X, Y)))


def positive_point_search(M: Cohom1Metric, ctx: QuotientContext, t_grid, n_directions: int = 64,
                          seed: int = DEFAULT_SEED, tol: float = 1e-12) -> dict | None:
    """First (t, g) with f'(t) != 0, F_g = 0 on the base biquotient and positive Ricci lower bound.

    Directions are seeded unit vectors c d_t + x with x horizontal, plus a basis
    of m2 cap H^Q_g with c = 0. Returns None when no sample qualifies.
    """
    sigma = ctx.sigma()
    d = M.decomposition
    m2 = list(d.m_blocks[1]) if d.k > 1 else []
    for t in t_grid:
        t = float(t)
        fp = M.profiles[0].jet(t)[1]
        if abs(fp) <= tol:
            continue
        for i in range(len(ctx.points)):
            if not is_free_at(ctx, i) or flat_directions(sigma, i).shape[0]:
                continue
            Y = metric_horizontal_frame(M, ctx, t, i)
            rng = np.random.default_rng(seed)
            dirs = []
            for _ in range(n_directions):
                v = rng.standard_normal(Y.shape[0] + 1)
                v /= np.linalg.norm(v)
                dirs.append((float(v[0]), v[1:] @ Y))
            if m2:
                E = np.eye(M.algebra.dim)[m2]
                dirs.extend((0.0, z) for z in orthogonal_complement(vertical_space(ctx, i), M.algebra.dim, within=E))
            vals = [upstairs_ricci(M, ctx, t, c, x, i) for c, x in dirs]
            worst = min(vals) if vals else 0.0
            if worst > tol:
                a, b = ctx.points[i]
                return {"t": t, "point": i, "a": [float(v) for v in a], "b": [float(v) for v in b],
                        "minRicciLower": float(worst), "directions": len(dirs)}
    return None
