"""Warping-function synthesis: inequality checks, the disc-bundle profile, profile equalization and gluing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import bisect

from .cohom1 import Cohom1Metric, abc_positivity_scan, curvature_general, plane_norm2
from .curvature_oracle import homogeneous_curvature
from .errors import BoundaryMismatchError, ConstructionError, DomainError, PreconditionError
from .profiles import (
    Blend,
    CheegerCone,
    Constant,
    ExpSaturation,
    Form,
    LinearCombo,
    Piece,
    Poly,
    PowerOfPoly,
    Reflected,
    WarpProfile,
    interior_grid,
)
from .sampling import CurvatureReport, SamplingPlan, argmin_first, parallel_map, unit_vectors, witness

INEQ_TOL = 1e-12


def _jet(f, ts):
    f = f if isinstance(f, (WarpProfile, Form)) else WarpProfile.single(f, *f.domain)
    return tuple(np.asarray(v, dtype=float) for v in f.jet(np.asarray(ts, dtype=float)))


def check_inequality(f, C: float, grid) -> dict:
    """Compare -f f'' >= C f'^2 with (f^(C+1))'' <= 0 on a grid.

    Both are reported raw; their signs are compared after normalizing by
    f'^2 + |f f''| (resp. (C + 1) f^(C-1) times the same scale) with values
    below 1e-12 counted as zero.
    """
    ts = np.asarray(grid, dtype=float)
    F, Fp, Fpp = _jet(f, ts)
    if np.any(F <= 0):
        raise DomainError("f must be positive on the grid")
    ineq = C * Fp * Fp + F * Fpp
    hpp = (C + 1.0) * C * F ** (C - 1.0) * Fp * Fp + (C + 1.0) * F**C * Fpp
    scale = Fp * Fp + np.abs(F * Fpp)
    safe = np.where(scale > 0, scale, 1.0)
    n1 = ineq / safe
    n2 = hpp / ((C + 1.0) * F ** (C - 1.0) * safe)

    def sgn(v):
        return np.where(np.abs(v) <= INEQ_TOL, 0, np.sign(v))

    agree = sgn(n1) == sgn(n2)
    j = int(np.argmax(ineq))
    return {
        "C": float(C),
        "maxIneq": float(ineq[j]),
        "tWorst": float(ts[j]),
        "maxHpp": float(np.max(hpp)),
        "violations": int(np.sum(ineq > INEQ_TOL)),
        "passes": bool(ineq[j] <= INEQ_TOL),
        "signAgree": bool(np.all(agree)),
        "ineq": ineq,
        "hpp": hpp,
    }


def solve_R0(delta: float, c0: float) -> float:
    """Root of (f0'/f0)^2 = delta, i.e. t (1 + c0^2 t^2) = delta^(-1/2)."""
    if not (np.isfinite(delta) and delta > 0 and np.isfinite(c0) and c0 > 0):
        raise DomainError("delta and c0 must be positive")
    target = delta**-0.5
    g = lambda t: t * (1.0 + c0 * c0 * t * t) - target  # noqa: E731
    hi = max(1.0, target)
    r0 = bisect(g, 0.0, hi, xtol=1e-300, rtol=1e-12, maxiter=2000)
    if r0 < 1.0 - 1e-12:
        raise DomainError(f"R0 = {r0} < 1: delta too large for the construction")
    return float(r0)


def _power_jet(f0: Form, t, C):
    f, fp, fpp = (float(v[0]) for v in f0.jet(np.array([t])))
    h = f ** (C + 1)
    hp = (C + 1) * f**C * fp
    hpp = (C + 1) * f ** (C - 1) * (C * fp * fp + f * fpp)
    return h, hp, hpp


def _smoothstep_poly(s: Polynomial) -> Polynomial:
    return 10 * s**3 - 15 * s**4 + 6 * s**5


@dataclass(frozen=True)
class CapPlan:
    R0: float
    w1: float
    Tc: float
    w2: float
    amp2: float

    @property
    def end(self) -> float:
        return self.Tc + self.w2


def _cap_hpp(plan: CapPlan, a0: float, lo: float, hi: float) -> Polynomial:
    """h'' on [lo, hi] as a polynomial in tau = t - lo."""
    mid = 0.5 * (lo + hi)
    out = Polynomial([0.0])
    if plan.R0 <= mid <= plan.R0 + plan.w1:
        s = Polynomial([(lo - plan.R0) / plan.w1, 1.0 / plan.w1])
        out = out + a0 * (1 - _smoothstep_poly(s))
    if plan.Tc - plan.w2 <= mid <= plan.Tc + plan.w2:
        u = Polynomial([(lo - plan.Tc) / plan.w2, 1.0 / plan.w2])
        out = out - plan.amp2 * (1 - u**2) ** 2
    return out


def _plan_cap(R0, s0, a0, D, R, w1=0.1, w2=0.25):
    """Choose bump widths so that h' falls from s0 to 0 and h rises by s0 D, ending by R - 1/2."""
    w1 = min(w1, s0 / abs(a0))
    for _ in range(60):
        m1 = abs(a0) * w1 / 2.0
        mu1 = w1 * 2.0 / 7.0  # centroid of 1 - S on [0, 1]
        m2 = s0 - m1
        offset = (s0 * D - m1 * mu1) / m2
        ww2 = min(w2, offset)
        if offset > 0 and R0 + offset + ww2 <= R - 0.5:
            return CapPlan(R0, w1, R0 + offset, ww2, m2 * 15.0 / (16.0 * ww2))
        w1 *= 0.5
    raise ConstructionError("could not fit the concave cap before R - 1/2")


@dataclass(frozen=True)
class BuiltDiscProfile:
    delta: float
    c0: float
    C: int
    R0: float
    R: float
    f: WarpProfile
    E: float
    cap: CapPlan | None = None
    meta: dict = field(default_factory=dict)

    @property
    def interval(self):
        return (1.0, self.R)

    def invariants(self, n: int = 4001) -> dict:
        """Every construction invariant with its worst value."""
        f = self.f
        ts = np.linspace(1.0, self.R, n)
        F, Fp, Fpp = _jet(f, ts)
        cone = ts[ts <= self.R0]
        f0 = CheegerCone(self.c0)
        cone_dev = float(np.max(np.abs(f(cone) - f0(cone)), initial=0.0))
        first = f.pieces[0]
        cone_exact = isinstance(first.form, CheegerCone) and first.form.c0 == self.c0 and first.hi == self.R0
        last = f.pieces[-1]
        terminal = isinstance(last.form, Constant) and last.form.value == 1.0 and last.hi > last.lo
        cap = np.linspace(self.R0, self.R, n)
        G, Gp, Gpp = _jet(f, cap)
        C = self.C
        hpp = (C + 1.0) * G ** (C - 1.0) * (C * Gp * Gp + G * Gpp)
        res = f.continuity_residuals()
        checks = {
            "coneExact": bool(cone_exact and cone_dev == 0.0),
            "coneDeviation": cone_dev,
            "terminalConstant": bool(terminal),
            "terminalLength": float(last.hi - last.lo) if terminal else 0.0,
            "maxHppOnCap": float(np.max(hpp)),
            "concave": bool(np.max(hpp) <= 1e-12),
            "minF": float(np.min(F)),
            "maxF": float(np.max(F)),
            "bounded": bool(np.min(F) > 0 and np.max(F) <= 1.0),
            "minFprime": float(np.min(Fp)),
            "nondecreasing": bool(np.min(Fp) >= -1e-12),
            "continuity": res.max(axis=0).tolist() if res.size else [0.0, 0.0, 0.0],
            "c2": f.is_c2(),
            "orderedRadii": bool(1.0 < self.R0 < self.R),
        }
        checks["passed"] = all(checks[k] for k in
                               ("coneExact", "terminalConstant", "concave", "bounded", "nondecreasing", "c2",
                                "orderedRadii"))
        return checks

    def metric(self, scenario) -> Cohom1Metric:
        one = WarpProfile.constant(1.0, 1.0, self.R)
        return Cohom1Metric(scenario.decomposition, (1.0, self.R), (self.f, one), f"{scenario.name}-disc")

    def to_json(self) -> dict:
        return {"delta": repr(self.delta), "c0": repr(self.c0), "C": self.C, "R0": repr(self.R0),
                "R": repr(self.R), "E": repr(self.E), "profile": self.f.to_json()}


def build_disc_profile(delta: float, c0: float, C: int) -> BuiltDiscProfile:
    """f = f0 on [1, R0], f = h^(1/(C+1)) on a concave cap for h, and f = 1 near R."""
    if int(C) != C or C < 9:
        raise DomainError("C must be an integer >= 9")
    C = int(C)
    R0 = solve_R0(delta, c0)
    if not R0 > 1.0:
        raise PreconditionError(f"R0 = {R0} must exceed 1")
    f0 = CheegerCone(c0)
    h0, s0, a0 = _power_jet(f0, R0, C)
    if not a0 < 0:
        raise PreconditionError(f"(f0^(C+1))''(R0) = {a0} is not negative; delta too large for c0 = {c0}, C = {C}")
    D = (1.0 - h0) / s0
    R = R0 + D + 1.0
    plan = _plan_cap(R0, s0, a0, D, R)
    E = plan.end
    cuts = sorted({R0, R0 + plan.w1, plan.Tc - plan.w2, E})
    cuts = [c for c in cuts if R0 <= c <= E]
    spans = [(lo, hi) for lo, hi in zip(cuts, cuts[1:]) if hi - lo > 1e-13 * max(1.0, hi)]

    # integrate forward from R0 on every span but the last, which is anchored at E (h = 1, h' = 0)
    polys = []
    h, hp = h0, s0
    for lo, hi in spans[:-1]:
        d2 = _cap_hpp(plan, a0, lo, hi)
        d1 = d2.integ() + hp
        p = d1.integ() + h
        polys.append((lo, hi, p))
        h, hp = float(p(hi - lo)), float(d1(hi - lo))
    lo, hi = spans[-1]
    d2 = _cap_hpp(plan, a0, lo, hi)
    L = hi - lo
    d1 = d2.integ()
    d1 = d1 - d1(L)
    p = d1.integ()
    p = p - p(L) + 1.0
    polys.append((lo, hi, p))
    seam = abs(float(p(0.0)) - h) + abs(float(d1(0.0)) - hp)

    e = 1.0 / (C + 1)
    pieces = [Piece(1.0, R0, f0)]
    for lo, hi, p in polys:
        pieces.append(Piece(lo, hi, PowerOfPoly(Poly(tuple(p.coef), lo), e)))
    pieces.append(Piece(E, R, Constant(1.0)))
    f = WarpProfile(pieces)
    return BuiltDiscProfile(float(delta), float(c0), C, R0, R, f, E, plan,
                            {"h0": h0, "s0": s0, "a0": a0, "D": D, "seam": seam})


def deformation_conditions(f, ftilde, c0: float, eps: float, grid, corrected: bool = False) -> dict:
    """Worst margins (positive = satisfied) of the four deformation conditions.

    ``corrected=False`` uses rho_i = (ft'_i - f'_1)/(f'_i - f'_1) and compares
    |ft'_i - f'_1| in the first branch of (iv); ``corrected=True`` uses ft'_1
    in both places.
    """
    if len(f) != len(ftilde):
        raise ValueError("profile tuples must have equal length")
    ts = np.asarray(grid, dtype=float)
    J = [_jet(p, ts) for p in f]
    Jt = [_jet(p, ts) for p in ftilde]
    m1 = min(float(np.min(eps - np.abs(jt[0] - c0))) for jt in Jt)
    m2 = min(float(np.min(np.abs(j[1]) + eps - np.abs(jt[1]))) for j, jt in zip(J, Jt))
    m3 = min(float(np.min(j[2] + eps - jt[2])) for j, jt in zip(J, Jt))
    k = len(f)
    f1p = J[0][1]
    ref = Jt[0][1] if corrected else f1p
    rho = []
    for i in range(1, k):
        den = J[i][1] - f1p
        with np.errstate(divide="ignore", invalid="ignore"):
            rho.append(np.where(den != 0, (Jt[i][1] - ref) / np.where(den != 0, den, 1.0), np.nan))
    m4 = np.inf
    rho_k = rho[-1] if rho else None
    for i in range(1, k):
        branch_a = eps - np.maximum(np.abs(Jt[i][1] - ref), np.abs(J[i][1] - f1p))
        with np.errstate(invalid="ignore"):
            b = np.minimum(1.0 + eps - np.abs(rho_k), eps - np.abs(rho[i - 1] - rho_k))
        b = np.where(np.isnan(b), -np.inf, b)
        m4 = min(m4, float(np.min(np.maximum(branch_a, b))))
    margins = {"i": m1, "ii": m2, "iii": m3, "iv": float(m4) if k > 1 else np.inf}
    return {
        "margins": margins,
        "holds": {key: bool(v > 0) for key, v in margins.items()},
        "passed": bool(all(v > 0 for v in margins.values())),
        "corrected": corrected,
        "rho": [np.asarray(r).tolist() for r in rho],
    }


def _form_at(p: WarpProfile, lo: float, hi: float) -> Form:
    forms = [pc.form for pc in p.pieces if pc.lo < hi and pc.hi > lo]
    if len(forms) != 1:
        raise PreconditionError("profiles must be a single analytic piece across the equalization window")
    return forms[0]


def base_min_sec(decomposition, n: int = 2000, seed: int = 42) -> float:
    """Sampled min sectional curvature of the normal homogeneous metric on G/H."""
    rng = np.random.default_rng(seed)
    d = decomposition
    X = unit_vectors(rng, n, d.parent.dim, d.m_indices)
    Y = unit_vectors(rng, n, d.parent.dim, d.m_indices)
    num = homogeneous_curvature(d, np.ones(d.k), X, Y)
    den = np.sum(X * X, 1) * np.sum(Y * Y, 1) - np.sum(X * Y, 1) ** 2
    ok = den > 1e-12
    return float(np.min(num[ok] / den[ok]))


def warped_product_criterion(f, base_sec: float, grid) -> dict:
    """f'' < 0 and f'^2 < Sec(G/H, g_Q) on the grid."""
    F, Fp, Fpp = _jet(f, grid)
    return {"maxFpp": float(np.max(Fpp)), "maxFp2": float(np.max(Fp * Fp)), "baseSec": base_sec,
            "holds": bool(np.max(Fpp) < 0 and np.max(Fp * Fp) < base_sec)}


@dataclass
class EqualizedMetric:
    metric: Cohom1Metric
    t0: float
    t1: float
    width: float
    target: Form
    order: tuple
    scan: dict
    final: dict
    conditions: dict | None = None


def equalize_profiles(M: Cohom1Metric, t0: float, target: Form | None = None, n_grid: int = 50, n_pairs: int = 200,
                      seed: int = 42, max_tries: int = 8, eps: float = 0.1) -> EqualizedMetric:
    """Deform the f_i near t0 to a single increasing concave warp, keeping positivity.

    ``eps`` is only used to report the deformation conditions on the modified
    window; the construction itself is validated by the positivity scan.
    """
    a, b = M.interval
    if not a < t0 < b:
        raise DomainError("t0 must be interior")
    f, fp, _ = M.jets(t0)
    if np.max(np.abs(f - f[0])) > 1e-9 * max(1.0, abs(f[0])) or np.any(fp <= 0):
        raise PreconditionError("need f_i(t0) equal and f_i'(t0) > 0 for all i")
    grid = interior_grid(a, b, n_grid)
    pre = abc_positivity_scan(M, grid, n_pairs, seed)
    if not pre["positive"]:
        raise PreconditionError(f"input metric fails the positivity scan: {pre}")
    order = tuple(int(i) for i in np.argsort(fp, kind="stable"))
    lo_room = min(t0 - a, b - t0)
    t1 = t0 + 0.2 * lo_room
    F, Fp, Fpp = M.jets(t1)
    i1, ik = order[0], order[-1]
    D = F[ik] - F[i1]
    Dp = Fp[ik] - Fp[i1]
    equal = abs(D) <= 1e-12 and abs(Dp) <= 1e-12
    if equal:
        s0, beta, Ci = t1, None, np.zeros(M.k)
        fbar1, fbar2 = Fp.copy(), Fpp.copy()
    else:
        if not (D > 0 and Dp > 0):
            raise PreconditionError("slopes do not separate at t1")
        L = 3.0 * D / Dp
        s0 = t1 - L
        if s0 <= a:
            raise ConstructionError("window for the cubic correction leaves the interval")
        A = D / L**3
        beta = Poly((0.0, 0.0, 0.0, A), s0)
        Ci = np.array([(F[i] - F[i1]) / D for i in range(M.k)])
        fbar1 = Fp - Ci * 3.0 * A * L * L
        fbar2 = Fpp - Ci * 6.0 * A * L
    v0, sl = float(F[i1]), float(Fp[i1])
    if target is None:
        kappa = 1.0 + 2.0 * max(0.0, -float(np.min(fbar2))) / sl
        target = ExpSaturation(v0, sl, kappa, t1)
    tv, tp, tpp = (float(np.asarray(v)) for v in target.jet(np.asarray(t1)))
    if abs(tv - v0) > 1e-12 or abs(tp - sl) > 1e-12 or not tpp < float(np.min(fbar2)):
        raise PreconditionError("target must match f_1 to first order at t1 with smaller second derivative")
    # When every bar curve already touches the target to first order at t1, a one-sided
    # blend keeps f'' below the bar curves; otherwise fall back to a centred quintic blend.
    onset = bool(np.all(np.abs(fbar1 - sl) <= 1e-9 * max(1.0, abs(sl))))
    width = 0.25 * min(t1 - s0 if beta is not None else t1 - a, b - t1)
    last = None
    for _ in range(max_tries):
        lo, hi = (t1, t1 + 2.0 * width) if onset else (t1 - width, t1 + width)
        profs = []
        for i, p in enumerate(M.profiles):
            fi = _form_at(p, min(s0, lo), b)
            pieces = list(p.restrict(a, min(s0, lo)).pieces) if min(s0, lo) > a else []
            bar = fi if beta is None or Ci[i] == 0.0 else LinearCombo(((1.0, fi), (-float(Ci[i]), beta)))
            if s0 < lo:
                pieces.append(Piece(s0, lo, bar))
            pieces.append(Piece(lo, hi, Blend(bar, target, lo, hi, "onset" if onset else "smooth")))
            pieces.append(Piece(hi, b, target))
            profs.append(WarpProfile(pieces))
        out = Cohom1Metric(M.decomposition, M.interval, tuple(profs), f"{M.name}-equalized")
        scan = abc_positivity_scan(out, np.union1d(grid, np.linspace(lo, hi, 11)[1:-1]), n_pairs, seed)
        last = (out, scan)
        if scan["positive"]:
            break
        width *= 0.5
    out, scan = last
    if not scan["positive"]:
        raise ConstructionError(f"positivity scan failed after equalization: {scan}")
    final = warped_product_criterion(target, base_min_sec(M.decomposition), interior_grid(hi, b, 64))
    window = interior_grid(max(a, min(s0, t0 - (t1 - t0))), hi, 400)
    conditions = deformation_conditions([M.profiles[i] for i in order], [out.profiles[i] for i in order],
                                        float(f[0]), eps, window)
    conditions["eps"] = eps
    return EqualizedMetric(out, t0, t1, width, target, order, scan, final, conditions)


@dataclass(frozen=True)
class GlueSide:
    profile: BuiltDiscProfile
    scenario: object


def _reflect(p: WarpProfile, center: float) -> list:
    return [Piece(center - pc.hi, center - pc.lo, Reflected(pc.form, center)) for pc in reversed(p.pieces)]


def glue_metric(left: GlueSide, right: GlueSide) -> Cohom1Metric:
    """Both discs joined along their common boundary slice: t in [1, R_L + R_R - 1]."""
    sL, sR = left.scenario, right.scenario
    if (sL.algebra.dim != sR.algebra.dim or not np.array_equal(sL.algebra.c, sR.algebra.c)
            or sL.decomposition.blocks != sR.decomposition.blocks):
        raise BoundaryMismatchError("the two sides have different slice data")
    pL, pR = left.profile, right.profile
    jl = np.array(pL.f.jet(np.array([pL.R])))[:, 0]
    jr = np.array(pR.f.jet(np.array([pR.R])))[:, 0]
    diff = float(np.max(np.abs(jl - jr * np.array([1.0, -1.0, 1.0]))))
    if diff >= 1e-12 or abs(jl[0] - 1.0) >= 1e-12:
        raise BoundaryMismatchError(f"boundary slice metrics differ by {diff}")
    center = pL.R + pR.R
    end = center - 1.0
    pieces = list(pL.f.pieces) + _reflect(pR.f, center)
    # merge the two terminal constants into one piece
    merged = []
    for pc in pieces:
        if merged and isinstance(pc.form, Constant) and isinstance(merged[-1].form, Constant) \
                and pc.form.value == merged[-1].form.value:
            merged[-1] = Piece(merged[-1].lo, pc.hi, pc.form)
        else:
            merged.append(pc)
    f = WarpProfile(merged)
    one = WarpProfile.constant(1.0, 1.0, end)
    return Cohom1Metric(sL.decomposition, (1.0, end), (f, one), f"{sL.name}-glued")


def glue_check(left: GlueSide, right: GlueSide, samples: SamplingPlan | None = None, kappa: float | None = None,
               n_directions: int = 64, example: str | None = None) -> CurvatureReport:
    """Assemble the glued metric, then bound Sec, Ric and Sec * diam^2."""
    M = glue_metric(left, right)
    plan = samples or SamplingPlan(n_t=64, n_pairs=128)
    pL, pR = left.profile, right.profile
    delta = max(pL.delta, pR.delta)
    d = M.decomposition
    a, b = M.interval
    ts = plan.t_grid(a, b)
    cuts = [pc.hi for pc in M.profiles[0].pieces[:-1]]
    ts = np.array([t if min(abs(t - c) for c in cuts) > 1e-6 else t - 2e-6 for t in ts])
    rng = np.random.default_rng(plan.seed)
    XY = [plan.pairs(d.parent.dim, d.m_indices, rng=rng) for _ in ts]

    def one(i):
        X, Y = XY[i]
        best = (np.inf, 0.0, 0)
        for c in plan.cs:
            sec = curvature_general(M, ts[i], c, X, Y) / plane_norm2(M, ts[i], c, X, Y)
            j = argmin_first(sec)
            if sec[j] < best[0]:
                best = (float(sec[j]), float(c), j)
        return best

    res = parallel_map(one, range(len(ts)))
    i = argmin_first([r[0] for r in res])
    min_sec, c_w, j_w = res[i]
    # certified lower bound: Sec >= -(f'/f)^2 on the caps, Sec >= 0 on the cones
    cert = 0.0
    for p in (pL, pR):
        cap = np.linspace(p.R0, p.R, 4001)
        F, Fp, _ = _jet(p.f, cap)
        cert = min(cert, -float(np.max((Fp / F) ** 2)))
    kap = left.scenario.kappa if kappa is None else kappa
    diam = 2.0 * (pL.R + pR.R) + np.pi * kap
    ric = _glued_ricci(M, left, right, n_directions, plan.seed)
    return CurvatureReport(
        example or M.name, plan.seed, int(len(ts) * plan.n_pairs * len(plan.cs)), min_sec,
        witness(ts[i], c_w, XY[i][0][j_w], XY[i][1][j_w]), minRicciBound=ric,
        extras={
            "delta": delta,
            "certifiedMinSec": cert,
            "secBoundHolds": bool(min_sec >= -delta * (1 + 1e-6) and cert >= -delta * (1 + 1e-6)),
            "ricciBoundHolds": bool(ric >= -1e-10),
            "diamEst": diam,
            "product": cert * diam * diam,
            "sampledProduct": min_sec * diam * diam,
            "RLeft": pL.R,
            "RRight": pR.R,
        },
    )


def _glued_ricci(M: Cohom1Metric, left: GlueSide, right: GlueSide, n_directions: int, seed: int) -> float:
    """Min Ricci lower bound over cap points where the inequality holds."""
    from .quotients import quotient_ricci_bound

    ctx = left.scenario.quotient_context(n_points=4, seed=seed)
    C = left.profile.C
    p = left.profile
    ts = np.linspace(p.R0, p.E, 9)[1:-1]
    ts = [t for t in ts if check_inequality(p.f, C, [t])["passes"]]
    if not ts:
        return 0.0
    Ml = p.metric(left.scenario)
    rng = np.random.default_rng(seed)
    vals = []
    for t in ts:
        for _ in range(max(1, n_directions // len(ts))):
            c = float(rng.uniform(-1, 1))
            vals.append(quotient_ricci_bound(Ml, ctx, float(t), c, None, C=C, rng=rng, point=0))
    return float(np.min(vals))


def fit_slope(x, y) -> dict:
    """Least squares line through (log x, log |y|) with its residual norm."""
    lx, ly = np.log(np.asarray(x, dtype=float)), np.log(np.abs(np.asarray(y, dtype=float)))
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, res, *_ = np.linalg.lstsq(A, ly, rcond=None)
    return {"slope": float(coef[0]), "intercept": float(coef[1]),
            "residual": float(np.sqrt(res[0])) if res.size else 0.0}


def scaling_sweep(deltas, c0: float = 1.0, C: int = 9, scenario=None, samples: SamplingPlan | None = None) -> dict:
    """R(delta), diameter and Sec * diam^2 over a delta ladder with fitted power laws."""
    rows = []
    for delta in deltas:
        p = build_disc_profile(float(delta), c0, C)
        row = {"delta": float(delta), "R0": p.R0, "R": p.R}
        if scenario is not None:
            side = GlueSide(p, scenario)
            rep = glue_check(side, side, samples=samples)
            row.update({"minSec": rep.minSec, "certifiedMinSec": rep.extras["certifiedMinSec"],
                        "diamEst": rep.extras["diamEst"], "product": rep.extras["product"]})
        rows.append(row)
    out = {"rows": rows, "slopeR": fit_slope([r["delta"] for r in rows], [r["R"] for r in rows])}
    if scenario is not None:
        out["slopeProduct"] = fit_slope([r["delta"] for r in rows], [r["product"] for r in rows])
    return out
