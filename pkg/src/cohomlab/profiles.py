"""Piecewise-analytic warping functions with exact first and second derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError


def _num(x) -> str:
    return repr(float(x))


def _den(s) -> float:
    return float(s)


def _sqrt_jet(u, du, d2u):
    """(f, f', f'') for f = sqrt(u)."""
    f = np.sqrt(u)
    fp = du / (2.0 * f)
    fpp = (0.5 * d2u - fp * fp) / f
    return f, fp, fpp


def smoothstep(s):
    """Quintic 0 -> 1 on [0, 1] with vanishing first and second derivatives at the ends."""
    s = np.clip(s, 0.0, 1.0)
    S = s**3 * (10.0 - 15.0 * s + 6.0 * s * s)
    dS = 30.0 * s * s * (1.0 - s) ** 2
    d2S = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)
    return S, dS, d2S


class Form:
    kind = "form"

    def jet(self, t):
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params()}

    def __call__(self, t):
        return self.jet(np.asarray(t, dtype=float))[0]


_FORMS: dict = {}


def _register(cls):
    _FORMS[cls.kind] = cls
    return cls


def form_from_json(doc: dict) -> Form:
    try:
        cls = _FORMS[doc["kind"]]
    except KeyError as exc:
        raise ValueError(f"unknown profile form {doc.get('kind')!r}") from exc
    return cls.from_params(doc)


@_register
@dataclass(frozen=True)
class Constant(Form):
    value: float
    kind = "Constant"

    def jet(self, t):
        t = np.asarray(t, dtype=float)
        z = np.zeros_like(t)
        return z + self.value, z, z.copy()

    def params(self):
        return {"value": _num(self.value)}

    @classmethod
    def from_params(cls, d):
        return cls(_den(d["value"]))


@_register
@dataclass(frozen=True)
class CheegerCone(Form):
    """c0 t / sqrt(1 + c0^2 t^2): the flat cone after Cheeger deformation with delta = 1."""

    c0: float
    kind = "CheegerCone"

    def jet(self, t):
        t = np.asarray(t, dtype=float)
        c = self.c0
        q = 1.0 + c * c * t * t
        f = c * t / np.sqrt(q)
        fp = c * q**-1.5
        fpp = -3.0 * c**3 * t * q**-2.5
        return f, fp, fpp

    def log_derivative(self, t):
        """f'/f = 1 / (t (1 + c0^2 t^2))."""
        t = np.asarray(t, dtype=float)
        return 1.0 / (t * (1.0 + self.c0**2 * t * t))

    def params(self):
        return {"c0": _num(self.c0)}

    @classmethod
    def from_params(cls, d):
        return cls(_den(d["c0"]))


@_register
@dataclass(frozen=True)
class Poly(Form):
    """sum_k coeffs[k] (t - origin)^k."""

    coeffs: tuple
    origin: float = 0.0
    kind = "Poly"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))

    def jet(self, t):
        tau = np.asarray(t, dtype=float) - self.origin
        p = np.polynomial.polynomial
        c = np.array(self.coeffs)
        d1 = p.polyder(c) if c.size > 1 else np.zeros(1)
        d2 = p.polyder(c, 2) if c.size > 2 else np.zeros(1)
        return p.polyval(tau, c), p.polyval(tau, d1), p.polyval(tau, d2)

    def params(self):
        return {"coeffs": [_num(a) for a in self.coeffs], "origin": _num(self.origin)}

    @classmethod
    def from_params(cls, d):
        return cls(tuple(_den(a) for a in d["coeffs"]), _den(d["origin"]))


def hermite_quintic(t0, t1, left, right) -> Poly:
    """Quintic matching (f, f', f'') jets ``left`` at t0 and ``right`` at t1."""
    L = t1 - t0
    M = np.zeros((6, 6))
    rhs = np.zeros(6)
    for row, (tau, jet) in enumerate(((0.0, left), (L, right))):
        for d in range(3):
            for k in range(d, 6):
                M[3 * row + d, k] = math.factorial(k) / math.factorial(k - d) * tau ** (k - d)
            rhs[3 * row + d] = jet[d]
    return Poly(tuple(np.linalg.solve(M, rhs)), t0)


@_register
@dataclass(frozen=True)
class PowerOfPoly(Form):
    """p(t)^exponent for a positive polynomial p."""

    poly: Poly
    exponent: float
    kind = "PowerOfPoly"

    def jet(self, t):
        p, dp, d2p = self.poly.jet(t)
        e = self.exponent
        if np.any(p <= 0):
            raise DomainError("PowerOfPoly base must be positive")
        f = p**e
        fp = e * p ** (e - 1) * dp
        fpp = e * (e - 1) * p ** (e - 2) * dp * dp + e * p ** (e - 1) * d2p
        return f, fp, fpp

    def params(self):
        return {"poly": self.poly.to_json(), "exponent": _num(self.exponent)}

    @classmethod
    def from_params(cls, d):
        return cls(form_from_json(d["poly"]), _den(d["exponent"]))


@_register
@dataclass(frozen=True)
class Sine(Form):
    """amplitude * sin(freq * t + phase)."""

    amplitude: float
    freq: float
    phase: float = 0.0
    kind = "Sine"

    def jet(self, t):
        arg = self.freq * np.asarray(t, dtype=float) + self.phase
        a, w = self.amplitude, self.freq
        s, c = np.sin(arg), np.cos(arg)
        return a * s, a * w * c, -a * w * w * s

    def params(self):
        return {"amplitude": _num(self.amplitude), "freq": _num(self.freq), "phase": _num(self.phase)}

    @classmethod
    def from_params(cls, d):
        return cls(_den(d["amplitude"]), _den(d["freq"]), _den(d["phase"]))


@_register
@dataclass(frozen=True)
class ExpSaturation(Form):
    """v0 + s0 (1 - exp(-kappa tau)) / kappa with tau = t - origin; increasing and concave."""

    v0: float
    s0: float
    kappa: float
    origin: float = 0.0
    kind = "ExpSaturation"

    def jet(self, t):
        tau = np.asarray(t, dtype=float) - self.origin
        e = np.exp(-self.kappa * tau)
        return self.v0 + self.s0 * (1.0 - e) / self.kappa, self.s0 * e, -self.s0 * self.kappa * e

    def params(self):
        return {"v0": _num(self.v0), "s0": _num(self.s0), "kappa": _num(self.kappa), "origin": _num(self.origin)}

    @classmethod
    def from_params(cls, d):
        return cls(_den(d["v0"]), _den(d["s0"]), _den(d["kappa"]), _den(d["origin"]))


@_register
@dataclass(frozen=True)
class BallProfile(Form):
    """sqrt(lam mu rho / (lam rho + (1 - lam) mu)) for a radial warp lam."""

    lam: Form
    mu: float
    rho: float
    kind = "BallProfile"

    def jet(self, t):
        l, dl, d2l = self.lam.jet(t)
        mu, rho = self.mu, self.rho
        D = mu + (rho - mu) * l
        if np.any(l <= 0) or np.any(D <= 0):
            raise DomainError("ball profile requires lam > 0")
        u = mu * rho * l / D
        du = mu * mu * rho * dl / D**2
        d2u = mu * mu * rho * (d2l / D**2 - 2.0 * (rho - mu) * dl * dl / D**3)
        return _sqrt_jet(u, du, d2u)

    def params(self):
        return {"lam": self.lam.to_json(), "mu": _num(self.mu), "rho": _num(self.rho)}

    @classmethod
    def from_params(cls, d):
        return cls(form_from_json(d["lam"]), _den(d["mu"]), _den(d["rho"]))


@_register
@dataclass(frozen=True)
class CheegerDeformed(Form):
    """sqrt(delta b^2 / (b^2 + delta)) for a base warp b."""

    base: Form
    delta: float
    kind = "CheegerDeformed"

    def jet(self, t):
        b, db, d2b = self.base.jet(t)
        d = self.delta
        v = b * b
        dv = 2.0 * b * db
        d2v = 2.0 * (db * db + b * d2b)
        q = v + d
        u = d * v / q
        du = d * d / q**2 * dv
        d2u = -2.0 * d * d / q**3 * dv * dv + d * d / q**2 * d2v
        return _sqrt_jet(u, du, d2u)

    def params(self):
        return {"base": self.base.to_json(), "delta": _num(self.delta)}

    @classmethod
    def from_params(cls, d):
        return cls(form_from_json(d["base"]), _den(d["delta"]))


@_register
@dataclass(frozen=True)
class LinearCombo(Form):
    terms: tuple
    kind = "LinearCombo"

    def jet(self, t):
        t = np.asarray(t, dtype=float)
        out = [np.zeros_like(t) for _ in range(3)]
        for coef, form in self.terms:
            for acc, part in zip(out, form.jet(t)):
                acc += coef * part
        return tuple(out)

    def params(self):
        return {"terms": [{"coef": _num(a), "form": f.to_json()} for a, f in self.terms]}

    @classmethod
    def from_params(cls, d):
        return cls(tuple((_den(x["coef"]), form_from_json(x["form"])) for x in d["terms"]))


def onset_step(s):
    """1 - (1 - s)^3 on [0, 1]: flat to second order at s = 1 only.

    Meant for joining curves that already agree to first order at s = 0, where
    S(0) = 0 alone keeps the join C^2.
    """
    s = np.asarray(s, dtype=float)
    inside = s > 0.0
    r = 1.0 - np.clip(s, 0.0, 1.0)
    return 1.0 - r**3, np.where(inside, 3.0 * r * r, 0.0), np.where(inside, -6.0 * r, 0.0)


_STEPS = {"smooth": smoothstep, "onset": onset_step}


@_register
@dataclass(frozen=True)
class Blend(Form):
    """(1 - S) left + S right with S a step from a to b ("smooth" quintic or "onset")."""

    left: Form
    right: Form
    a: float
    b: float
    step: str = "smooth"
    kind = "Blend"

    def jet(self, t):
        t = np.asarray(t, dtype=float)
        w = self.b - self.a
        S, dS, d2S = _STEPS[self.step]((t - self.a) / w)
        dS, d2S = dS / w, d2S / (w * w)
        l, dl, d2l = self.left.jet(t)
        r, dr, d2r = self.right.jet(t)
        g, dg, d2g = r - l, dr - dl, d2r - d2l
        return l + S * g, dl + dS * g + S * dg, d2l + d2S * g + 2.0 * dS * dg + S * d2g

    def params(self):
        return {"left": self.left.to_json(), "right": self.right.to_json(), "a": _num(self.a), "b": _num(self.b),
                "step": self.step}

    @classmethod
    def from_params(cls, d):
        return cls(form_from_json(d["left"]), form_from_json(d["right"]), _den(d["a"]), _den(d["b"]),
                   d.get("step", "smooth"))


@_register
@dataclass(frozen=True)
class Scaled(Form):
    form: Form
    factor: float
    kind = "Scaled"

    def jet(self, t):
        return tuple(self.factor * p for p in self.form.jet(t))

    def params(self):
        return {"form": self.form.to_json(), "factor": _num(self.factor)}

    @classmethod
    def from_params(cls, d):
        return cls(form_from_json(d["form"]), _den(d["factor"]))


@_register
@dataclass(frozen=True)
class Shifted(Form):
    """form(t - shift)."""

    form: Form
    shift: float
    kind = "Shifted"

    def jet(self, t):
        return self.form.jet(np.asarray(t, dtype=float) - self.shift)

    def params(self):
        return {"form": self.form.to_json(), "shift": _num(self.shift)}

    @classmethod
    def from_params(cls, d):
        return cls(form_from_json(d["form"]), _den(d["shift"]))


@_register
@dataclass(frozen=True)
class Square(Form):
    inner: Form
    kind = "Square"

    def jet(self, t):
        l, dl, d2l = self.inner.jet(t)
        return l * l, 2.0 * l * dl, 2.0 * (dl * dl + l * d2l)

    def params(self):
        return {"inner": self.inner.to_json()}

    @classmethod
    def from_params(cls, d):
        return cls(form_from_json(d["inner"]))


@_register
@dataclass(frozen=True)
class Reflected(Form):
    """form(center - t)."""

    form: Form
    center: float
    kind = "Reflected"

    def jet(self, t):
        f, fp, fpp = self.form.jet(self.center - np.asarray(t, dtype=float))
        return f, -fp, fpp

    def params(self):
        return {"form": self.form.to_json(), "center": _num(self.center)}

    @classmethod
    def from_params(cls, d):
        return cls(form_from_json(d["form"]), _den(d["center"]))


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    form: Form


class WarpProfile:
    """Ordered pieces (lo, hi, form) covering a closed interval without gaps."""

    def __init__(self, pieces: Sequence):
        ps = []
        for p in pieces:
            ps.append(p if isinstance(p, Piece) else Piece(float(p[0]), float(p[1]), p[2]))
        if not ps:
            raise ValueError("a profile needs at least one piece")
        for a, b in zip(ps, ps[1:]):
            if a.hi != b.lo:
                raise ValueError(f"pieces must be contiguous: {a.hi} != {b.lo}")
        for p in ps:
            if not p.lo < p.hi:
                raise ValueError("each piece needs lo < hi")
        self.pieces = tuple(ps)
        self._edges = np.array([p.hi for p in ps[:-1]])

    @classmethod
    def single(cls, form: Form, lo: float, hi: float) -> "WarpProfile":
        return cls([(lo, hi, form)])

    @classmethod
    def constant(cls, value: float, lo: float, hi: float) -> "WarpProfile":
        return cls([(lo, hi, Constant(value))])

    @property
    def domain(self):
        return self.pieces[0].lo, self.pieces[-1].hi

    @property
    def breakpoints(self):
        return tuple(p.hi for p in self.pieces[:-1])

    def jet(self, t):
        """(f, f', f'') at t; at a breakpoint the right-hand piece is used."""
        t = np.asarray(t, dtype=float)
        lo, hi = self.domain
        if np.any(t < lo) or np.any(t > hi) or not np.all(np.isfinite(t)):
            raise DomainError(f"t outside profile domain [{lo}, {hi}]")
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        idx = np.searchsorted(self._edges, tt, side="right")
        out = np.empty((3, tt.size))
        for i in np.unique(idx):
            sel = idx == i
            f, fp, fpp = self.pieces[i].form.jet(tt[sel])
            out[0, sel], out[1, sel], out[2, sel] = f, fp, fpp
        if scalar:
            return float(out[0, 0]), float(out[1, 0]), float(out[2, 0])
        return out[0].reshape(t.shape), out[1].reshape(t.shape), out[2].reshape(t.shape)

    def __call__(self, t):
        return self.jet(t)[0]

    def is_constant(self) -> bool:
        return all(isinstance(p.form, Constant) for p in self.pieces)

    def near_breakpoint(self, t, tol: float = 1e-9) -> bool:
        return any(abs(t - b) <= tol for b in self.breakpoints)

    def continuity_residuals(self) -> np.ndarray:
        """Per breakpoint jumps in (f, f', f'')."""
        res = []
        for a, b in zip(self.pieces, self.pieces[1:]):
            la = np.array(a.form.jet(np.array([a.hi])))[:, 0]
            rb = np.array(b.form.jet(np.array([b.lo])))[:, 0]
            res.append(np.abs(la - rb))
        return np.array(res).reshape(-1, 3)

    def is_c2(self, tol0: float = 1e-12, tol2: float = 1e-9) -> bool:
        r = self.continuity_residuals()
        if r.size == 0:
            return True
        return bool(np.all(r[:, :2] <= tol0) and np.all(r[:, 2] <= tol2))

    def restrict(self, lo: float, hi: float) -> "WarpProfile":
        out = []
        for p in self.pieces:
            a, b = max(p.lo, lo), min(p.hi, hi)
            if a < b:
                out.append(Piece(a, b, p.form))
        return WarpProfile(out)

    def map_forms(self, fn) -> "WarpProfile":
        return WarpProfile([Piece(p.lo, p.hi, fn(p.form)) for p in self.pieces])

    def to_json(self) -> dict:
        return {"pieces": [{"lo": _num(p.lo), "hi": _num(p.hi), "form": p.form.to_json()} for p in self.pieces]}

    @classmethod
    def from_json(cls, doc: dict) -> "WarpProfile":
        return cls([Piece(_den(p["lo"]), _den(p["hi"]), form_from_json(p["form"])) for p in doc["pieces"]])

    def __repr__(self):
        lo, hi = self.domain
        return f"WarpProfile([{lo}, {hi}], {len(self.pieces)} pieces)"


def interior_grid(lo: float, hi: float, n: int, margin: float = 1e-6) -> np.ndarray:
    """n uniform points in [lo, hi] with both ends pulled in by margin * (hi - lo)."""
    m = margin * (hi - lo)
    return np.linspace(lo + m, hi - m, n)
