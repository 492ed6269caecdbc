"""Registry of validated example scenarios.

All structure constants are built from integer matrix arithmetic and read off
as exact integers; the few irrational constants (Hopf circle generators) are
stored as 40-digit decimal strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import ConstructionError, UnknownScenarioError
from .lie_core import BlockDecomposition, LieAlgebra, check_algebra
from .profiles import CheegerCone, Constant, WarpProfile

INV_SQRT2 = "0.7071067811865475244008443621048490392848"


def so_basis(n: int):
    """Pairs (i, j), 1 <= i < j <= n, in lexicographic order; E_ij = e_i e_j^T - e_j e_i^T."""
    return list(combinations(range(1, n + 1), 2))


def _so_matrix(n, pair):
    i, j = pair
    E = np.zeros((n, n), dtype=np.int64)
    E[i - 1, j - 1] = 1
    E[j - 1, i - 1] = -1
    return E


def so_algebra(n: int) -> LieAlgebra:
    """so(n) with Q(X, Y) = -tr(XY)/2, for which the E_ij are orthonormal."""
    pairs = so_basis(n)
    mats = [_so_matrix(n, p) for p in pairs]
    d = len(pairs)
    c = np.zeros((d, d, d))
    for a in range(d):
        for b in range(d):
            com = mats[a] @ mats[b] - mats[b] @ mats[a]
            for k, (i, j) in enumerate(pairs):
                c[a, b, k] = com[i - 1, j - 1]
    return LieAlgebra(d, c, f"so({n})")


def so_index(n: int, i: int, j: int) -> int:
    return so_basis(n).index((min(i, j), max(i, j)))


def su2_algebra() -> LieAlgebra:
    """su(2) with [e_i, e_j] = eps_ijk e_k (e_i = i/2, j/2, k/2 in the quaternions)."""
    c = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[i, j, k] = 1.0
        c[j, i, k] = -1.0
    return LieAlgebra(3, c, "su(2)")


def abelian_algebra(n: int) -> LieAlgebra:
    return LieAlgebra(n, np.zeros((n, n, n)), f"R^{n}")


def direct_sum(A: LieAlgebra, B: LieAlgebra, name: str | None = None) -> LieAlgebra:
    n = A.dim + B.dim
    c = np.zeros((n, n, n))
    c[: A.dim, : A.dim, : A.dim] = A.c
    c[A.dim :, A.dim :, A.dim :] = B.c
    return LieAlgebra(n, c, name or f"{A.name}+{B.name}")


def u2_algebra() -> LieAlgebra:
    """u(2) with Q(X, Y) = -Re tr(XY) in the basis iE22, iE11, (E12 - E21)/sqrt2, i(E12 + E21)/sqrt2."""
    s = 1.0 / np.sqrt(2.0)
    basis = [
        np.array([[0, 0], [0, 1j]]),
        np.array([[1j, 0], [0, 0]]),
        s * np.array([[0, 1], [-1, 0]], dtype=complex),
        s * np.array([[0, 1j], [1j, 0]]),
    ]
    gram = np.array([[-np.real(np.trace(a @ b)) for b in basis] for a in basis])
    if np.max(np.abs(gram - np.eye(4))) > 1e-15:
        raise ConstructionError("u(2) basis is not Q-orthonormal")
    c = np.zeros((4, 4, 4))
    for a in range(4):
        for b in range(4):
            com = basis[a] @ basis[b] - basis[b] @ basis[a]
            for k in range(4):
                c[a, b, k] = -np.real(np.trace(com @ basis[k]))
    exact = np.rint(c)
    if np.max(np.abs(c - exact)) > 1e-12:
        raise ConstructionError("u(2) structure constants are not integral in this basis")
    return LieAlgebra(4, exact, "u(2)")


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    algebra: LieAlgebra
    decomposition: BlockDecomposition
    k_indices: tuple = ()
    l_basis: tuple = ()
    rho: tuple | None = None
    interval: tuple = (0.5, 3.0)
    c0: float = 1.0
    kappa: float = 1.0
    deltas: tuple = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)
    metadata: dict = field(default_factory=dict)

    @property
    def is_semisimple(self) -> bool:
        return self.algebra.is_semisimple()

    @property
    def l_rows(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.l_basis]).reshape(-1, self.algebra.dim)

    @property
    def C(self) -> int:
        """max(dim N, 9) for N = I x L\\G/H."""
        return max(self.dim_N, 9)

    @property
    def dim_N(self) -> int:
        dim_gh = self.algebra.dim - len(self.decomposition.h_indices)
        return 1 + dim_gh - len(self.l_basis)

    def default_metric(self, c0: float | None = None):
        """dt^2 + f0(t)^2 Q|m1 + Q|m2 with the Cheeger cone profile on the scenario interval."""
        from .cohom1 import Cohom1Metric

        a, b = self.interval
        f = WarpProfile.single(CheegerCone(self.c0 if c0 is None else c0), a, b)
        one = WarpProfile.single(Constant(1.0), a, b)
        return Cohom1Metric(self.decomposition, (a, b), (f, one), self.name)

    def quotient_context(self, n_points: int = 32, seed: int = 42):
        from .quotients import QuotientContext

        return QuotientContext.one_sided(self.algebra, self.decomposition, self.l_rows,
                                         k_indices=self.k_indices, n_points=n_points, seed=seed)

    def to_json(self) -> dict:
        doc = self.algebra.to_json(self.decomposition.blocks)
        doc["name"] = self.name
        doc["k"] = list(self.k_indices)
        doc["l"] = [[str(v) for v in row] for row in self.l_basis]
        return doc


def _scenario(name, desc, A, blocks, k_idx, l_basis=(), **kw) -> Scenario:
    d = BlockDecomposition(A, blocks)
    return Scenario(name, desc, A, d, tuple(k_idx), tuple(tuple(r) for r in l_basis), **kw)


def _su2_berger():
    A = su2_algebra()
    return _scenario("su2-berger", "su(2) with u(1) = span(e1); Berger-type two-block metrics on S^3",
                     A, [[], [0], [1, 2]], [0], rho=(0.25, 0.25, 0.25),
                     metadata={"rhoNote": "orbit map of SU(2) on S^3 in H with e_i = i/2, j/2, k/2"})


def _so3_sphere():
    A = so_algebra(3)
    n = lambda i, j: so_index(3, i, j)  # noqa: E731
    return _scenario("so3-sphere", "so(2) in so(3); S^2 = SO(3)/SO(2) as the only block",
                     A, [[n(1, 2)], [n(1, 3), n(2, 3)], []], [n(1, 2), n(1, 3), n(2, 3)])


def _so4_stiefel():
    A = so_algebra(4)
    n = lambda i, j: so_index(4, i, j)  # noqa: E731
    hopf = ["0"] * 6
    hopf[n(1, 2)] = INV_SQRT2
    hopf[n(3, 4)] = INV_SQRT2
    return _scenario("so4-stiefel", "so(2) in so(3) in so(4); Hopf circle acting on SO(4)/SO(3) = S^3",
                     A, [[n(1, 2)], [n(1, 3), n(2, 3)], [n(1, 4), n(2, 4), n(3, 4)]],
                     [n(1, 2), n(1, 3), n(2, 3)], [hopf], interval=(0.5, 3.0))


def _so5_two_block():
    A = so_algebra(5)
    n = lambda i, j: so_index(5, i, j)  # noqa: E731
    h = [n(1, 2), n(1, 3), n(2, 3)]
    m1 = [n(1, 4), n(2, 4), n(3, 4)]
    m2 = [n(i, 5) for i in range(1, 5)]
    return _scenario("so5-two-block", "so(3) in so(4) in so(5); S^3 -> S^4 two-block decomposition",
                     A, [h, m1, m2], h + m1)


def _torus2_flat():
    A = abelian_algebra(2)
    return _scenario("torus2-flat", "abelian R^2 (torus T^2) with the circle L = span(e1)",
                     A, [[], [0], [1]], [0], [["1", "0"]])


def _son_circle():
    m = 2
    so = so_algebra(2 * m)
    A = direct_sum(so, abelian_algebra(1), "so(4)+R")
    n = lambda i, j: so_index(4, i, j)  # noqa: E731
    e_r = 6
    # L generated by J + 2 e_R with J = E12 + E34 spanning the centre of u(2)
    l = ["0"] * 7
    l[n(1, 2)] = "1"
    l[n(3, 4)] = "1"
    l[e_r] = "2"
    h = [n(3, 4)]
    m1 = [n(2, 3), n(2, 4)]
    m2 = [n(1, 2), n(1, 3), n(1, 4), e_r]
    return _scenario("son-circle", "so(4)+R with the centre circle of u(2) twisted into R as L (m = 2)",
                     A, [h, m1, m2], h + m1, [l],
                     metadata={"m": m, "orbitCodimensions": [2, 2 * m - 1],
                               "note": "Lie-algebra data only; isotropy of the singular orbits is not modeled"})


def _u2_sphere():
    A = u2_algebra()
    return _scenario("u2-sphere", "u(2) acting on S^3 in C^2; chain u(1) in t^2 in u(2) with rho = (rho0, 1, 1/2)",
                     A, [[0], [1], [2, 3]], [0, 1], rho=(1.0, 1.0, 0.5),
                     interval=(0.5, 3.0),
                     metadata={"rhoNote": "orbit map at p = (1, 0): |iE11 p|^2 = 1, |b p|^2 = 1/2 on m2"})


_REGISTRY = {
    "su2-berger": _su2_berger,
    "so3-sphere": _so3_sphere,
    "so4-stiefel": _so4_stiefel,
    "so5-two-block": _so5_two_block,
    "torus2-flat": _torus2_flat,
    "son-circle": _son_circle,
    "u2-sphere": _u2_sphere,
}

_CACHE: dict = {}


def validate_scenario(s: Scenario) -> Scenario:
    diag = check_algebra(s.algebra)
    if not diag.passed:
        raise ConstructionError(f"{s.name}: algebra check failed: {diag}")
    res = s.decomposition.validate()
    if max(res.values()) >= 1e-12:
        raise ConstructionError(f"{s.name}: decomposition check failed: {res}")
    if s.k_indices:
        from .lie_core import _closure_residual

        if _closure_residual(s.algebra, s.k_indices) >= 1e-12:
            raise ConstructionError(f"{s.name}: k is not a subalgebra")
    return s


def load_scenario(name: str) -> Scenario:
    if name not in _REGISTRY:
        raise UnknownScenarioError(name)
    if name not in _CACHE:
        _CACHE[name] = validate_scenario(_REGISTRY[name]())
    return _CACHE[name]


def list_scenarios() -> list:
    return [(name, load_scenario(name).description) for name in _REGISTRY]


def scenario_from_json(doc: dict) -> Scenario:
    A = LieAlgebra.from_json(doc)
    blocks = doc.get("blocks") or [[]]
    d = BlockDecomposition(A, blocks)
    l_basis = tuple(tuple(str(v) for v in row) for row in doc.get("l", []))
    k_idx = tuple(doc.get("k", tuple(d.blocks[0]) + (tuple(d.blocks[1]) if len(d.blocks) > 1 else ())))
    s = Scenario(doc.get("name", A.name), doc.get("description", "user scenario"), A, d, k_idx, l_basis)
    return validate_scenario(s)


def load_scenario_file(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return scenario_from_json(json.load(fh))
