"""Curvature of cohomogeneity-one metrics dt^2 + sum_i f_i(t)^2 Q|m_i on I x G/H."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import kernels
from .curvature_oracle import _check_in_m, homogeneous_curvature
from .errors import DimensionError, DomainError, PreconditionError
from .lie_core import BlockDecomposition
from .profiles import WarpProfile, interior_grid
from .sampling import CurvatureReport, SamplingPlan, argmin_first, parallel_map, witness

HYPOTHESIS_TOL = 1e-12


@dataclass(frozen=True)
class Cohom1Metric:
    decomposition: BlockDecomposition
    interval: tuple
    profiles: tuple
    name: str = "metric"

    def __post_init__(self):
        a, b = (float(v) for v in self.interval)
        if not a < b:
            raise ValueError("interval needs a < b")
        object.__setattr__(self, "interval", (a, b))
        profs = tuple(p if isinstance(p, WarpProfile) else WarpProfile.single(p, a, b) for p in self.profiles)
        if len(profs) != self.decomposition.k:
            raise DimensionError(f"need {self.decomposition.k} profiles, got {len(profs)}")
        for p in profs:
            lo, hi = p.domain
            if lo > a or hi < b:
                raise DomainError(f"profile domain [{lo}, {hi}] does not cover ({a}, {b})")
        object.__setattr__(self, "profiles", profs)
        grid = interior_grid(a, b, 33)
        for p in profs:
            if np.any(p(grid) <= 0):
                raise DomainError("profiles must be positive on the interval")

    @property
    def k(self) -> int:
        return self.decomposition.k

    @property
    def algebra(self):
        return self.decomposition.parent

    @property
    def two_block_normalized(self) -> bool:
        if self.k != 2 or not self.profiles[1].is_constant():
            return False
        a, b = self.interval
        if np.any(np.abs(self.profiles[1](interior_grid(a, b, 9)) - 1.0) > 0):
            return False
        f = self.profiles[0](interior_grid(a, b, 257))
        return bool(np.all(f <= 1.0 + 1e-12))

    def near_breakpoint(self, t, tol: float = 1e-9) -> bool:
        return any(p.near_breakpoint(t, tol) for p in self.profiles)

    def check_t(self, t):
        a, b = self.interval
        if not a < t < b:
            raise DomainError(f"t = {t} is not interior to ({a}, {b})")

    def jets(self, t):
        """Per-block arrays (f, f', f'')."""
        js = np.array([p.jet(float(t)) for p in self.profiles])
        return js[:, 0], js[:, 1], js[:, 2]

    def phi_jet(self, t):
        """Per-block phi = f^2, phi' and phi''."""
        f, fp, fpp = self.jets(t)
        return f * f, 2.0 * f * fp, 2.0 * (fp * fp + f * fpp)

    def weight_jet(self, t):
        """phi, phi', phi'' spread over basis indices (h and unused indices get 1, 0, 0)."""
        n = self.algebra.dim
        p, dp, d2p = np.ones(n), np.zeros(n), np.zeros(n)
        ph, dph, d2ph = self.phi_jet(t)
        for i, idx in enumerate(self.decomposition.m_blocks):
            idx = list(idx)
            p[idx], dp[idx], d2p[idx] = ph[i], dph[i], d2ph[i]
        return p, dp, d2p

    def g_norm2(self, t, x):
        p = self.weight_jet(t)[0]
        return np.sum(p * np.asarray(x) ** 2, axis=-1)

    def cheeger(self, delta: float) -> "Cohom1Metric":
        from .cheeger import deform_metric

        return deform_metric(self, delta)

    def scaled_Q(self, s: float) -> "Cohom1Metric":
        """Same profiles with Q replaced by s Q, expressed in the rescaled orthonormal basis."""
        from .lie_core import LieAlgebra

        A = self.algebra
        # basis e_i / sqrt(s) is sQ-orthonormal; structure constants scale by 1/sqrt(s)
        B = LieAlgebra(A.dim, A.c / np.sqrt(s), A.name + f"*{s}")
        d = BlockDecomposition(B, self.decomposition.blocks, self.decomposition.flags)
        return Cohom1Metric(d, self.interval, self.profiles, self.name)


def _blockwise(M: Cohom1Metric, vals, fill: float = 1.0):
    out = np.full(M.algebra.dim, fill)
    for i, idx in enumerate(M.decomposition.m_blocks):
        out[list(idx)] = vals[i]
    return out


def curvature_general(M: Cohom1Metric, t, c, x, y):
    """R(c d_t + x, y; y, c d_t + x) term by term from the general diagonal formula."""
    M.check_t(t)
    d = M.decomposition
    A = M.algebra
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    _check_in_m(d, x, y)
    ph, dph, d2ph = M.phi_jet(t)
    phi = _blockwise(M, ph)
    dphi = _blockwise(M, dph, 0.0)
    d2phi = _blockwise(M, d2ph, 0.0)

    X, Y = np.broadcast_arrays(np.atleast_2d(x), np.atleast_2d(y))
    X = np.ascontiguousarray(X)
    Y = np.ascontiguousarray(Y)
    Q = lambda u, v: np.sum(u * v, axis=-1)  # noqa: E731
    br = lambda u, v: kernels.bracket_batch(A.c, u, v)  # noqa: E731

    slice_ = homogeneous_curvature(d, ph, X, Y)
    dX, dY = dphi * X, dphi * Y
    wedge = Q(dX, X) * Q(dY, Y) - Q(dX, Y) * Q(dY, X)

    def pi_plus(u, v):
        return 0.5 * (br(u, phi * v) + br(v, phi * u))

    s = dphi / phi
    lin = 1.5 * Q(dphi * br(X, Y), Y) + Q(s * Y, pi_plus(X, Y)) - Q(s * X, pi_plus(Y, Y))
    quad = Q((2.0 * d2phi - dphi * dphi / phi) * Y, Y)
    val = slice_ - 0.25 * wedge + c * lin - 0.25 * c * c * quad
    if np.ndim(x) == 1 and np.ndim(y) == 1:
        return float(val[0])
    return val


def _split(M: Cohom1Metric, v):
    d = M.decomposition
    m1, m2 = list(d.m_blocks[0]), list(d.m_blocks[1])
    v1 = np.zeros_like(v)
    v2 = np.zeros_like(v)
    v1[..., m1] = v[..., m1]
    v2[..., m2] = v[..., m2]
    return v1, v2


def _proj(v, idx):
    out = np.zeros_like(v)
    idx = list(idx)
    out[..., idx] = v[..., idx]
    return out


def curvature_two_block(M: Cohom1Metric, t, c, x, y):
    """R(c d_t + x, y; y, c d_t + x) for dt^2 + f^2 Q|m1 + Q|m2 from the two-block formula."""
    if not M.two_block_normalized:
        raise PreconditionError("metric is not of the two-block normalized shape")
    M.check_t(t)
    d = M.decomposition
    A = M.algebra
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    _check_in_m(d, x, y)
    f, fp, fpp = M.profiles[0].jet(float(t))
    X, Y = np.broadcast_arrays(np.atleast_2d(x), np.atleast_2d(y))
    X, Y = np.ascontiguousarray(X), np.ascontiguousarray(Y)
    x1, x2 = _split(M, X)
    y1, y2 = _split(M, Y)
    br = lambda u, v: kernels.bracket_batch(A.c, u, v)  # noqa: E731
    Q = lambda u, v: np.sum(u * v, axis=-1)  # noqa: E731
    hidx = d.h_indices
    kidx = tuple(d.h_indices) + tuple(d.m_blocks[0])
    m2idx = d.m_blocks[1]
    f2 = f * f

    xy_h = _proj(br(X, Y), hidx)
    b22 = br(x2, y2)
    b11 = br(x1, y1)
    mixed = _proj(b22, m2idx) + f2 * (br(x1, y2) + br(x2, y1))
    b22k = _proj(b22, kidx)
    wedge11 = Q(x1, x1) * Q(y1, y1) - Q(x1, y1) ** 2

    val = (
        0.75 * f2 * Q(xy_h, xy_h)
        + 0.25 * Q(mixed, mixed)
        + 0.25 * f2 * Q(b11, b11)
        + 0.5 * f2 * (3.0 - 2.0 * f2) * Q(b11, b22)
        + (1.0 - 0.75 * f2) * Q(b22k, b22k)
        + 3.0 * c * f * fp * Q(b22, y1)
        - c * c * f * fpp * Q(y1, y1)
        - (f * fp) ** 2 * wedge11
    )
    if np.ndim(x) == 1 and np.ndim(y) == 1:
        return float(val[0])
    return val


def abc_decompose(M: Cohom1Metric, t, x, y):
    """Coefficients (A, B, C) of the curvature as a quadratic polynomial in c."""
    r0 = curvature_general(M, t, 0.0, x, y)
    rp = curvature_general(M, t, 1.0, x, y)
    rm = curvature_general(M, t, -1.0, x, y)
    A = r0
    B = 0.5 * (rp - rm)
    C = 0.5 * (rp + rm) - r0
    return A, B, C


def plane_norm2(M: Cohom1Metric, t, c, x, y):
    """|(c d_t + x) ^ y|^2 in the metric at t."""
    p = M.weight_jet(t)[0]
    xx = c * c + np.sum(p * x * x, axis=-1)
    yy = np.sum(p * y * y, axis=-1)
    xy = np.sum(p * x * y, axis=-1)
    return xx * yy - xy * xy


def discriminant_identity_residual(f):
    """|1/4 f^2 (1 - 3/4 f^2) - 1/16 f^4 (3 - 2 f^2)^2 - 1/4 f^2 (1 - f^2)^3|."""
    f = np.asarray(f, dtype=float)
    f2 = f * f
    lhs = 0.25 * f2 * (1.0 - 0.75 * f2) - f2 * f2 * (3.0 - 2.0 * f2) ** 2 / 16.0
    rhs = 0.25 * f2 * (1.0 - f2) ** 3
    return np.abs(lhs - rhs)


def hypothesis_margin(f, fp, fpp, C: float = 9.0):
    """-f f'' - C f'^2 (nonnegative where the inequality holds)."""
    return -f * fpp - C * fp * fp


def sec_lower_bound_check(M: Cohom1Metric, samples: SamplingPlan | None = None, example: str | None = None,
                          histogram_path: str | None = None, C: float = 9.0) -> CurvatureReport:
    """Check R >= -(f f')^2 |x1 ^ y1|^2 wherever -f f'' >= C f'^2 holds."""
    if not M.two_block_normalized:
        raise PreconditionError("sec_lower_bound_check needs a two-block normalized metric with f <= 1")
    plan = samples or SamplingPlan()
    d = M.decomposition
    a, b = M.interval
    ts = plan.t_grid(a, b)
    ts = np.array([_nudge(M, t) for t in ts])
    rng = np.random.default_rng(plan.seed)
    support = d.m_indices
    XY = [plan.pairs(d.parent.dim, support, rng=rng) for _ in ts]
    cs = np.array(plan.cs, dtype=float)

    def one(i):
        t = ts[i]
        X, Y = XY[i]
        f, fp, fpp = M.profiles[0].jet(float(t))
        holds = hypothesis_margin(f, fp, fpp, C) >= -HYPOTHESIS_TOL * max(1.0, abs(f * fpp))
        x1, _ = _split(M, X)
        y1, _ = _split(M, Y)
        w11 = np.sum(x1 * x1, 1) * np.sum(y1 * y1, 1) - np.sum(x1 * y1, 1) ** 2
        bound = -((f * fp) ** 2) * w11
        rows = []
        for c in cs:
            vals = curvature_two_block(M, t, c, X, Y)
            sec = vals / plane_norm2(M, t, c, X, Y)
            rows.append((vals - bound, sec))
        slack = np.stack([r[0] for r in rows])
        sec = np.stack([r[1] for r in rows])
        return holds, slack, sec

    results = parallel_map(one, range(len(ts)))
    holds = np.array([r[0] for r in results])
    slack = np.stack([r[1] for r in results])  # (nt, nc, npairs)
    sec = np.stack([r[2] for r in results])
    checked = slack[holds]
    violations = int(np.sum(checked < -1e-12)) if checked.size else 0
    j = argmin_first(sec.ravel())
    ti, ci, pi = np.unravel_index(j, sec.shape)
    k = argmin_first(slack.ravel()) if slack.size else 0
    si = np.unravel_index(k, slack.shape)
    f_samples = np.linspace(1e-3, 1.0, 1000)
    if histogram_path:
        write_histogram(histogram_path, checked.ravel() if checked.size else np.zeros(0))
    return CurvatureReport(
        example=example or M.name,
        seed=plan.seed,
        nSamples=int(sec.size),
        minSec=float(sec.ravel()[j]),
        minSecWitness=witness(ts[ti], cs[ci], XY[ti][0][pi], XY[ti][1][pi]),
        minRicciBound=None,
        slackHistogramCsvPath=histogram_path,
        extras={
            "minSlack": float(slack.ravel()[k]),
            "minSlackWitness": witness(ts[si[0]], cs[si[1]], XY[si[0]][0][si[2]], XY[si[0]][1][si[2]]),
            "hypothesisViolations": int(np.sum(~holds)),
            "boundViolations": violations,
            "checkedSamples": int(checked.size),
            "discriminantResidual": float(np.max(discriminant_identity_residual(f_samples))),
        },
    )


def _nudge(M: Cohom1Metric, t, eps: float = 1e-6):
    a, b = M.interval
    for p in M.profiles:
        for bp in p.breakpoints:
            if abs(t - bp) < eps:
                t = bp - eps if bp - eps > a else bp + eps
    return t


def write_histogram(path: str, values, bins: int = 32):
    values = np.asarray(values, dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_lo", "bin_hi", "count"])
        if values.size == 0:
            return
        lo, hi = float(values.min()), float(values.max())
        if hi <= lo:
            hi = lo + 1.0
        counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
        for i, n in enumerate(counts):
            w.writerow([repr(float(edges[i])), repr(float(edges[i + 1])), int(n)])


def equality_case_details(M: Cohom1Metric, t, x2, y, c: float = 0.0, tol: float = 1e-12) -> dict:
    f, fp, _ = M.profiles[0].jet(float(t))
    if fp == 0.0:
        raise PreconditionError("the equality criterion needs f'(t) != 0")
    x2 = np.asarray(x2, dtype=float)
    y = np.asarray(y, dtype=float)
    x1, _ = _split(M, x2)
    if np.max(np.abs(x1), initial=0.0) > 0:
        raise DomainError("x must lie in m2")
    y1, y2 = _split(M, y)
    A = M.algebra
    value = curvature_two_block(M, t, c, x2, y)
    resid = A.bracket(x2, y2) + f * f * A.bracket(x2, y1)
    scale = 1.0 + np.sum(x2 * x2) * np.sum(y * y)
    zero = abs(value) <= tol * scale
    cond = bool(np.max(np.abs(c * y1), initial=0.0) <= tol and np.max(np.abs(resid), initial=0.0) <= tol * scale)
    return {"value": value, "curvatureZero": bool(zero), "conditionsHold": cond}


def equality_case_check(M: Cohom1Metric, t, x2, y, c: float = 0.0) -> bool:
    """True when 'curvature vanishes' and 'c y1 = 0 and [x2, y2] + f^2 [x2, y1] = 0' agree."""
    r = equality_case_details(M, t, x2, y, c)
    return r["curvatureZero"] == r["conditionsHold"]


def abc_positivity_scan(M: Cohom1Metric, ts, n_pairs: int = 200, seed: int = 42) -> dict:
    """Worst margins of A > 0, C > 0 and AC - B^2/4 > 0 over seeded planes, normalized by Q-norms."""
    d = M.decomposition
    rng = np.random.default_rng(seed)
    dim = d.parent.dim
    from .sampling import unit_vectors

    pairs = [(unit_vectors(rng, n_pairs, dim, d.m_indices), unit_vectors(rng, n_pairs, dim, d.m_indices)) for _ in ts]

    def one(i):
        X, Y = pairs[i]
        A, B, C = abc_decompose(M, float(ts[i]), X, Y)
        yy = np.sum(Y * Y, 1)
        wedge = np.sum(X * X, 1) * yy - np.sum(X * Y, 1) ** 2
        return (float(np.min(A / wedge)), float(np.min(C / yy)), float(np.min((A * C - 0.25 * B * B) / (wedge * yy))))

    res = np.array(parallel_map(one, range(len(ts))))
    worst = res.min(axis=0)
    at = res.argmin(axis=0)
    return {
        "minA": float(worst[0]),
        "minC": float(worst[1]),
        "minDisc": float(worst[2]),
        "tWorst": [float(ts[i]) for i in at],
        "positive": bool(np.all(worst > 0)),
    }


def formula_crosscheck(M: Cohom1Metric, samples: SamplingPlan | None = None, example: str | None = None) -> dict:
    """General formula against the Gauss-Codazzi oracle (and the two-block formula where it applies).

    Discrepancies are relative: |a - b| / (1 + |b|).
    """
    from .curvature_oracle import gauss_codazzi_curvature

    plan = samples or SamplingPlan()
    d = M.decomposition
    ts = np.array([_nudge(M, t) for t in plan.t_grid(*M.interval)])
    rng = np.random.default_rng(plan.seed)
    XY = [plan.pairs(d.parent.dim, d.m_indices, rng=rng) for _ in ts]
    two = M.two_block_normalized

    def one(i):
        X, Y = XY[i]
        out = []
        for c in plan.cs:
            g = curvature_general(M, ts[i], c, X, Y)
            o = gauss_codazzi_curvature(M, ts[i], c, X, Y)
            e1 = np.abs(g - o) / (1.0 + np.abs(o))
            e2 = np.abs(curvature_two_block(M, ts[i], c, X, Y) - g) / (1.0 + np.abs(g)) if two else np.zeros_like(g)
            out.append((e1, e2))
        return np.array([o[0] for o in out]), np.array([o[1] for o in out])

    res = parallel_map(one, range(len(ts)))
    e1 = np.stack([r[0] for r in res])  # (nt, nc, npairs)
    e2 = np.stack([r[1] for r in res])
    j = int(np.argmax(e1.ravel()))
    ti, ci, pi = np.unravel_index(j, e1.shape)
    return {
        "example": example or M.name,
        "seed": plan.seed,
        "nSamples": int(e1.size),
        "maxGeneralVsOracle": float(e1.ravel()[j]),
        "worstWitness": witness(ts[ti], plan.cs[ci], XY[ti][0][pi], XY[ti][1][pi]),
        "twoBlockApplies": bool(two),
        "maxTwoBlockVsGeneral": float(np.max(e2)) if two else None,
    }
