"""Cheeger deformations, chain metrics and the ball profiles built from them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .cohom1 import Cohom1Metric, curvature_general, plane_norm2
from .curvature_oracle import LeftInvariantMetric, left_invariant_curvature
from .errors import DomainError, PreconditionError
from .lie_core import BlockDecomposition
from .profiles import BallProfile, CheegerDeformed, Constant, Form, Poly, Sine, Square, WarpProfile
from .sampling import CurvatureReport, SamplingPlan, argmin_first, parallel_map, unit_vectors, witness


def cheeger_deform(phi, delta):
    """delta phi / (phi + delta), blockwise."""
    phi = np.asarray(phi, dtype=float)
    if not np.isfinite(delta) or delta <= 0:
        raise DomainError("delta must be positive")
    if np.any(~np.isfinite(phi)) or np.any(phi <= 0):
        raise DomainError("phi must be positive")
    return delta * phi / (phi + delta)


def deform_metric(M: Cohom1Metric, delta: float) -> Cohom1Metric:
    """Blockwise Cheeger deformation of every profile: f^2 -> delta f^2 / (f^2 + delta)."""
    if delta <= 0:
        raise DomainError("delta must be positive")
    profs = tuple(p.map_forms(lambda form: CheegerDeformed(form, delta)) for p in M.profiles)
    return Cohom1Metric(M.decomposition, M.interval, profs, f"{M.name}@delta={delta!r}")


@dataclass(frozen=True)
class ChainMetric:
    """Left-invariant metric c_i Q on m_i for a chain of subalgebras k_0 in ... in k_n = g."""

    decomposition: BlockDecomposition
    c: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.c)
        if len(c) != len(self.decomposition.blocks):
            raise ValueError("one weight per block (including block 0) is required")
        if any(v <= 0 for v in c):
            raise DomainError("chain weights must be positive")
        object.__setattr__(self, "c", c)
        d = self.decomposition
        if sorted(d.used_indices()) != list(range(d.parent.dim)):
            raise ValueError("a chain decomposition must cover the algebra")
        if not all(d.prefix_is_subalgebra(i) for i in range(len(d.blocks))):
            raise PreconditionError("every prefix of a chain must be a subalgebra")

    @property
    def nondecreasing(self) -> bool:
        return all(a <= b for a, b in zip(self.c, self.c[1:]))

    def weights(self) -> np.ndarray:
        w = np.empty(self.decomposition.parent.dim)
        for ci, idx in zip(self.c, self.decomposition.blocks):
            w[list(idx)] = ci
        return w

    def metric(self) -> LeftInvariantMetric:
        return LeftInvariantMetric.diagonal(self.decomposition.parent, self.weights())


def chain_metric_curvature_scan(m: ChainMetric, samples: SamplingPlan | None = None, n_planes: int | None = None,
                                example: str = "chain") -> CurvatureReport:
    plan = samples or SamplingPlan()
    n = n_planes or plan.n_pairs * plan.n_t
    A = m.decomposition.parent
    rng = np.random.default_rng(plan.seed)
    X = unit_vectors(rng, n, A.dim, range(A.dim))
    Y = unit_vectors(rng, n, A.dim, range(A.dim))
    g = m.metric()
    chunks = np.array_split(np.arange(n), max(1, min(16, n // 256)))
    vals = np.concatenate(parallel_map(lambda ix: left_invariant_curvature(g, X[ix], Y[ix]), chunks))
    w = m.weights()
    xx, yy, xy = (np.sum(w * X * X, 1), np.sum(w * Y * Y, 1), np.sum(w * X * Y, 1))
    sec = vals / (xx * yy - xy * xy)
    j = argmin_first(sec)
    return CurvatureReport(example, plan.seed, n, float(sec[j]), witness(0.0, 0.0, X[j], Y[j]),
                           extras={"weights": list(m.c), "hypothesis": m.nondecreasing})


@dataclass(frozen=True)
class SphereChainData:
    """rho_0 .. rho_r making (K, g_rho) -> (S^n, g_0) a Riemannian submersion, and mu in (0, rho_r)."""

    chain: BlockDecomposition
    rho: tuple
    mu: float

    def __post_init__(self):
        rho = tuple(float(v) for v in self.rho)
        if len(rho) != len(self.chain.blocks):
            raise ValueError("one rho per block (including rho_0) is required")
        if any(r <= 0 for r in rho):
            raise DomainError("rho must be positive")
        if any(a < b for a, b in zip(rho, rho[1:])):
            raise PreconditionError("rho must be nonincreasing (choose rho_0 >= rho_1)")
        object.__setattr__(self, "rho", rho)
        if not 0 < self.mu < min(rho[1:] or rho):
            raise DomainError("mu must lie in (0, rho_r)")


def sphere_chain_constants(s: SphereChainData) -> ChainMetric:
    """c_i = mu rho_i / (rho_i - mu)."""
    c = tuple(s.mu * r / (r - s.mu) for r in s.rho)
    if any(a > b * (1 + 1e-15) for a, b in zip(c, c[1:])):
        raise PreconditionError("chain constants are not nondecreasing")
    return ChainMetric(s.chain, c)


def default_lambda() -> Form:
    """lam(t) = 2 sin(t/2) on (0, pi); lam(pi/3) = 1."""
    return Sine(2.0, 0.5)


def ball_t0(lam: Form, interval) -> float:
    a, b = interval
    g = lambda t: float(lam(t)) - 1.0  # noqa: E731
    ts = np.linspace(a, b, 513)
    vals = np.array([g(t) for t in ts])
    for i in range(len(ts) - 1):
        if vals[i] == 0.0:
            return float(ts[i])
        if vals[i] < 0 < vals[i + 1]:
            t0 = brentq(g, ts[i], ts[i + 1], xtol=1e-15, rtol=1e-15)
            if lam.jet(np.array([t0]))[1][0] > 0:
                return float(t0)
    raise PreconditionError("no t0 with lam(t0) = 1 and lam'(t0) > 0")


def ball_profile(s: SphereChainData, lam: Form | None = None, interval=(0.5, np.pi - 0.05), squared: bool = False,
                 name: str = "ball") -> Cohom1Metric:
    """Diagonal metric with f_i^2 = lam mu rho_i / (lam rho_i + (1 - lam) mu) for i >= 1.

    ``squared=True`` substitutes lam^2 for lam (the deformation of dt^2 + lam^2 g_0).
    """
    lam = lam or default_lambda()
    a, b = interval
    grid = np.linspace(a, b, 257)
    if np.any(lam(grid) <= 0):
        raise DomainError("lam must be positive on the interval")
    if squared:
        lam = Square(lam)
    profs = tuple(WarpProfile.single(BallProfile(lam, s.mu, r), a, b) for r in s.rho[1:])
    return Cohom1Metric(s.chain, (a, b), profs, name)


def diameter_estimate(M: Cohom1Metric, kappa: float = 1.0, n: int = 257) -> float:
    """Interval length plus pi * max_t max_i f_i(t) * kappa."""
    a, b = M.interval
    ts = np.linspace(a, b, n)
    fmax = max(float(np.max(p(ts))) for p in M.profiles)
    return (b - a) + np.pi * fmax * kappa


def min_sec_scan(M: Cohom1Metric, plan: SamplingPlan):
    """Minimum of R / |X ^ Y|^2 over the plan, with its witness."""
    d = M.decomposition
    ts = plan.t_grid(*M.interval)
    rng = np.random.default_rng(plan.seed)
    XY = [plan.pairs(d.parent.dim, d.m_indices, rng=rng) for _ in ts]

    def one(i):
        X, Y = XY[i]
        best = (np.inf, None)
        for c in plan.cs:
            sec = curvature_general(M, ts[i], c, X, Y) / plane_norm2(M, ts[i], c, X, Y)
            j = argmin_first(sec)
            if sec[j] < best[0]:
                best = (float(sec[j]), (c, j))
        return best

    res = parallel_map(one, range(len(ts)))
    i = argmin_first([r[0] for r in res])
    c, j = res[i][1]
    return res[i][0], witness(ts[i], c, XY[i][0][j], XY[i][1][j])


def cheeger_family_scan(M: Cohom1Metric, deltas, samples: SamplingPlan | None = None, kappa: float = 1.0,
                        example: str | None = None) -> list:
    plan = samples or SamplingPlan(n_t=32, n_pairs=64)
    reports = []
    for delta in deltas:
        Md = deform_metric(M, float(delta))
        sec, wit = min_sec_scan(Md, plan)
        diam = diameter_estimate(Md, kappa)
        reports.append(CurvatureReport(example or M.name, plan.seed, plan.n_samples, sec, wit,
                                       extras={"delta": float(delta), "diamEst": diam, "product": sec * diam * diam}))
    return reports


def product_trend_ok(reports, tol: float = 1e-12) -> bool:
    """min sec * diam^2 climbs toward 0 as delta decreases; once nonnegative it may stay anywhere >= 0."""
    order = sorted(reports, key=lambda r: -r.extras["delta"])
    prods = [r.extras["product"] for r in order]
    return all(b >= min(a, 0.0) - tol * max(1.0, abs(a)) for a, b in zip(prods, prods[1:]))


def convex_warp_metric(scenario, f0: float = 0.5, curv: float = 0.1) -> Cohom1Metric:
    """dt^2 + f^2 Q|m1 + Q|m2 with f = f0 + curv/2 (t - a)^2; negative radial curvature -f''/f."""
    a, b = scenario.interval
    f = WarpProfile.single(Poly((f0, 0.0, 0.5 * curv), a), a, b)
    one = WarpProfile.single(Constant(1.0), a, b)
    return Cohom1Metric(scenario.decomposition, (a, b), (f, one), f"{scenario.name}-convex")
