"""Seeded sampling plans and a deterministic worker pool."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

DEFAULT_SEED = 42


def thread_count() -> int:
    raw = os.environ.get("COHOMLAB_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def parallel_map(fn, items):
    """map(fn, items) on a thread pool; results keep the input order."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class SamplingPlan:
    n_t: int = 64
    n_pairs: int = 256
    cs: tuple = (0.0, 1.0, -1.0, 5.0, -5.0)
    margin: float = 1e-6
    seed: int = DEFAULT_SEED

    @property
    def n_samples(self) -> int:
        return self.n_t * self.n_pairs * len(self.cs)

    def t_grid(self, a: float, b: float) -> np.ndarray:
        m = self.margin * (b - a)
        return np.linspace(a + m, b - m, self.n_t)

    def pairs(self, dim: int, support, n: int | None = None, rng=None):
        """Two stacks of Q-unit vectors supported on the given basis indices."""
        rng = np.random.default_rng(self.seed) if rng is None else rng
        n = self.n_pairs if n is None else n
        return unit_vectors(rng, n, dim, support), unit_vectors(rng, n, dim, support)

    def to_json(self) -> dict:
        return {"nT": self.n_t, "nPairs": self.n_pairs, "cs": [float(c) for c in self.cs],
                "margin": self.margin, "seed": self.seed}


def unit_vectors(rng, n: int, dim: int, support) -> np.ndarray:
    support = list(support)
    out = np.zeros((n, dim))
    if not support:
        return out
    v = rng.standard_normal((n, len(support)))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    out[:, support] = v
    return out


def argmin_first(values) -> int:
    """Index of the first minimum; NaNs are treated as -inf so they surface."""
    v = np.asarray(values, dtype=float)
    v = np.where(np.isnan(v), -np.inf, v)
    return int(np.argmin(v))


@dataclass
class CurvatureReport:
    example: str
    seed: int
    nSamples: int
    minSec: float
    minSecWitness: dict | None
    minRicciBound: float | None = None
    slackHistogramCsvPath: str | None = None
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = {
            "example": self.example,
            "seed": self.seed,
            "nSamples": self.nSamples,
            "minSec": self.minSec,
            "minSecWitness": self.minSecWitness,
            "minRicciBound": self.minRicciBound,
            "slackHistogramCsvPath": self.slackHistogramCsvPath,
        }
        doc.update(self.extras)
        return doc


def witness(t, c, x, y) -> dict:
    return {"t": float(t), "c": float(c), "x": [float(v) for v in x], "y": [float(v) for v in y]}
