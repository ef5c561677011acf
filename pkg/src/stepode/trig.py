"""Truncated trigonometric series on [-l, l).

A :class:`TrigSeries` is ``half_c0 + sum_k c_k cos(k pi x / l) + d_k sin(k pi x / l)``
for ``k = 1..K``.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from . import kernels

__all__ = [
    "GAUSS_ORDER",
    "TrigSeries",
    "zero_series",
    "eval_series",
    "differentiate",
    "combine",
    "analyze",
    "analyze_samples",
    "min_nodes",
]

#: Nodes per panel of the composite Gauss-Legendre rule used by :func:`analyze`.
GAUSS_ORDER = 8


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).ravel()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TrigSeries:
    l: float
    half_c0: float
    cos: np.ndarray
    sin: np.ndarray

    def __post_init__(self):
        l = float(self.l)
        if not np.isfinite(l) or l <= 0:
            raise ValueError(f"half-length l must be positive and finite, got {self.l!r}")
        c, d = _frozen(self.cos), _frozen(self.sin)
        if c.size != d.size:
            raise ValueError(f"cos and sin coefficient counts differ ({c.size} vs {d.size})")
        h = float(self.half_c0)
        if not (np.isfinite(h) and np.all(np.isfinite(c)) and np.all(np.isfinite(d))):
            raise ValueError("series coefficients must be finite")
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "half_c0", h)
        object.__setattr__(self, "cos", c)
        object.__setattr__(self, "sin", d)

    @property
    def K(self) -> int:
        return self.cos.size

    @property
    def w(self) -> float:
        return np.pi / self.l

    def __call__(self, x):
        out = kernels.eval_series(self.half_c0, self.cos, self.sin, self.w, x)
        return float(out) if out.ndim == 0 else out

    def __eq__(self, other):
        if not isinstance(other, TrigSeries):
            return NotImplemented
        return (
            self.l == other.l
            and self.half_c0 == other.half_c0
            and np.array_equal(self.cos, other.cos)
            and np.array_equal(self.sin, other.sin)
        )

    def __hash__(self):
        return hash((self.l, self.half_c0, self.cos.tobytes(), self.sin.tobytes()))

    def __repr__(self):
        return f"TrigSeries(l={self.l!r}, half_c0={self.half_c0!r}, K={self.K})"

    def resized(self, K: int) -> TrigSeries:
        """Truncate or zero-pad to ``K`` harmonics."""
        c = np.zeros(K)
        d = np.zeros(K)
        n = min(K, self.K)
        c[:n] = self.cos[:n]
        d[:n] = self.sin[:n]
        return TrigSeries(self.l, self.half_c0, c, d)

    def coefficients(self) -> np.ndarray:
        """``[half_c0, c_1, d_1, c_2, d_2, ...]`` as one flat vector."""
        out = np.empty(1 + 2 * self.K)
        out[0] = self.half_c0
        out[1::2] = self.cos
        out[2::2] = self.sin
        return out

    def to_dict(self) -> dict:
        return {
            "half_c0": self.half_c0,
            "cos": [float(v) for v in self.cos],
            "sin": [float(v) for v in self.sin],
        }


def zero_series(l: float, K: int = 0) -> TrigSeries:
    return TrigSeries(l, 0.0, np.zeros(K), np.zeros(K))


def eval_series(ts: TrigSeries, x):
    return ts(x)


def differentiate(ts: TrigSeries, n: int) -> TrigSeries:
    """Exact ``n``-th derivative, term by term."""
    if n < 0:
        raise ValueError(f"derivative order must be non-negative, got {n}")
    if n == 0:
        return ts
    scale = (np.arange(1, ts.K + 1) * ts.w) ** n
    a, b = ts.cos * scale, ts.sin * scale
    # each derivative rotates (cos, sin) -> (sin, -cos) coefficient-wise
    r = n % 4
    if r == 0:
        c, d = a, b
    elif r == 1:
        c, d = b, -a
    elif r == 2:
        c, d = -a, -b
    else:
        c, d = -b, a
    return TrigSeries(ts.l, 0.0, c, d)


def combine(alpha: float, ts1: TrigSeries, beta: float, ts2: TrigSeries) -> TrigSeries:
    if ts1.l != ts2.l:
        raise ValueError(f"cannot combine series with l={ts1.l!r} and l={ts2.l!r}")
    K = max(ts1.K, ts2.K)
    a, b = ts1.resized(K), ts2.resized(K)
    return TrigSeries(
        ts1.l,
        alpha * a.half_c0 + beta * b.half_c0,
        alpha * a.cos + beta * b.cos,
        alpha * a.sin + beta * b.sin,
    )


def min_nodes(K: int) -> int:
    return 4 * K + 1


def _gauss_panels(l: float, Q: int):
    t, wt = np.polynomial.legendre.leggauss(GAUSS_ORDER)
    edges = -l + 2.0 * l * np.arange(Q + 1) / Q
    h = edges[1:] - edges[:-1]
    x = (edges[:-1, None] + 0.5 * h[:, None] * (t[None, :] + 1.0)).ravel()
    weights = (0.5 * h[:, None] * wt[None, :]).ravel()
    return x, weights


def analyze(g: Callable, l: float, K: int = 20, Q: int | None = None) -> TrigSeries:
    """Fourier coefficients of ``g`` on [-l, l) up to harmonic ``K``.

    The integrals are computed with a composite Gauss-Legendre rule on ``Q``
    uniform panels (``GAUSS_ORDER`` nodes each). Panels never touch ``x = l``
    so ``g`` is only sampled inside the half-open domain. ``Q`` defaults to the
    minimum ``4K + 1``.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if Q is None:
        Q = min_nodes(K)
    if Q < min_nodes(K):
        raise ValueError(f"Q={Q} is below the minimum {min_nodes(K)} for K={K}")
    x, weights = _gauss_panels(float(l), int(Q))
    try:
        gx = np.asarray(g(x), dtype=np.float64)
        if gx.shape != x.shape:
            gx = np.broadcast_to(gx, x.shape)
    except (TypeError, ValueError):
        gx = np.array([float(g(xi)) for xi in x])
    if not np.all(np.isfinite(gx)):
        raise ValueError("non-finite sample encountered while analyzing forcing")
    mean, c, d = kernels.project(gx, x, weights, K, np.pi / l)
    return TrigSeries(l, mean / (2.0 * l), c / l, d / l)


def analyze_samples(samples: Sequence[float], l: float, K: int = 20) -> TrigSeries:
    """Fourier coefficients from samples on the uniform grid ``-l + 2lj/Q``.

    This is the periodic trapezoid rule (a real DFT), exact for trigonometric
    polynomials of degree below ``Q - K``.
    """
    g = np.asarray(samples, dtype=np.float64).ravel()
    Q = g.size
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if Q < min_nodes(K):
        raise ValueError(f"{Q} samples are below the minimum {min_nodes(K)} for K={K}")
    if not np.all(np.isfinite(g)):
        raise ValueError("non-finite sample encountered while analyzing forcing")
    x = -l + 2.0 * l * np.arange(Q) / Q
    weights = np.full(Q, 2.0 * l / Q)
    mean, c, d = kernels.project(g, x, weights, K, np.pi / l)
    return TrigSeries(l, mean / (2.0 * l), c / l, d / l)
