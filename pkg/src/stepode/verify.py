"""Checks that do not trust the solver: residual grids, an undetermined-coefficients
oracle, finite differences, and the frozen-coefficient convergence study."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from . import kernels
from .solver import (
    DEFAULT_EPS,
    ODEProblem,
    PiecewiseSolution,
    Resonance,
    SolvabilityError,
    SolvabilityReport,
    _solve_rows,
    apply_operator_constant,
    apply_operator_piecewise,
    build_psi_S,
)
from .stepfn import uniform_partition
from .trig import TrigSeries, combine

__all__ = [
    "ResidualReport",
    "ConvergenceTable",
    "grid_points",
    "residual_grid",
    "pointwise_solution",
    "convergence_study",
    "oracle_order2",
    "fd_weights",
    "fd_residual_check",
]

DEFAULT_GRID = 1000
DELTA_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class ResidualReport:
    grid: np.ndarray
    residuals: np.ndarray
    sup_norm: float
    l2_norm: float

    def to_dict(self) -> dict:
        return {
            "grid": self.grid.tolist(),
            "residuals": self.residuals.tolist(),
            "sup_norm": self.sup_norm,
            "l2_norm": self.l2_norm,
        }


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple[tuple[int, float], ...]

    def __post_init__(self):
        S = [r[0] for r in self.rows]
        if any(b <= a for a, b in zip(S, S[1:])):
            raise ValueError(f"S values must be strictly increasing, got {S}")

    @property
    def S(self) -> np.ndarray:
        return np.array([r[0] for r in self.rows], dtype=int)

    @property
    def distances(self) -> np.ndarray:
        return np.array([r[1] for r in self.rows])

    def ratios(self) -> np.ndarray:
        d = self.distances
        return d[:-1] / d[1:]

    def to_dict(self) -> dict:
        return {"S": self.S.tolist(), "distance": self.distances.tolist()}


def grid_points(l: float, n_points: int, excluded: Sequence[float], delta: float) -> np.ndarray:
    """``n_points`` uniform points on [-l, l] minus the ``delta``-balls around ``excluded``."""
    x = np.linspace(-l, l, n_points)
    ex = np.unique(np.concatenate([np.asarray(excluded, dtype=np.float64), [-l, l]]))
    pos = np.clip(np.searchsorted(ex, x), 1, ex.size - 1)
    dist = np.minimum(np.abs(x - ex[pos - 1]), np.abs(x - ex[pos]))
    return x[dist > delta]


def _check_structure(p: ODEProblem, sol: PiecewiseSolution):
    if sol.l != p.l:
        raise ValueError(f"solution has l={sol.l!r}, problem has l={p.l!r}")
    for n, c in enumerate(p.coefficients):
        if not sol.partition.refines(c.partition):
            raise ValueError(f"solution partition does not refine the partition of A_{n}")


def residual_grid(
    p: ODEProblem,
    sol: PiecewiseSolution,
    n_points: int = DEFAULT_GRID,
    delta: float | None = None,
    method: str = "differentiate",
) -> ResidualReport:
    """Sample ``L(Psi) - f`` off the breakpoints.

    The residual is formed exactly as a series per cell before sampling, so
    what remains is rounding in the coefficients and in the evaluation.
    """
    _check_structure(p, sol)
    if delta is None:
        delta = DELTA_RTOL * p.l
    L = apply_operator_piecewise(p, sol, method)
    f = p.forcing.resized(max(sol.K, p.forcing.K))
    res = PiecewiseSolution(sol.partition, tuple(combine(1.0, c, -1.0, f) for c in L.cells))
    grid = grid_points(p.l, n_points, sol.partition.breakpoints, delta)
    if grid.size == 0:
        raise ValueError(f"delta={delta!r} excludes every one of the {n_points} grid points")
    r = res(grid)
    r = np.atleast_1d(r)
    return ResidualReport(grid, r, float(np.max(np.abs(r))), float(np.sqrt(np.mean(r * r))))


# ---------------------------------------------------------------------------
# convergence of the frozen-coefficient solutions


def _sample(g, x: np.ndarray) -> np.ndarray:
    if not callable(g):
        return np.full(x.shape, float(g))
    try:
        out = np.asarray(g(x), dtype=np.float64)
        if out.shape == x.shape:
            return out
        return np.broadcast_to(out, x.shape).copy()
    except (TypeError, ValueError):
        return np.array([float(g(xi)) for xi in x])


def pointwise_solution(
    coeffs: Sequence[Callable | float],
    l: float,
    f: TrigSeries,
    x,
    K: int | None = None,
    eps: float = DEFAULT_EPS,
) -> np.ndarray:
    """The series solution with ``sigma_k(x)``, ``omega_k(x)`` taken at each ``x`` itself."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    f = f if K is None else f.resized(K)
    A = np.column_stack([_sample(g, x) for g in coeffs])
    try:
        half, alpha, beta = _solve_rows(A, f, eps)
    except SolvabilityError as exc:
        pairs = ", ".join(f"x={x[r.cell]!r} k={r.k}" for r in exc.report.resonant_pairs[:5])
        raise SolvabilityError(exc.report, f"{exc} (at {pairs})") from None
    return kernels.eval_cells(np.arange(x.size), half, alpha, beta, np.pi / l, x)


def convergence_study(
    coeffs: Sequence[Callable | float],
    l: float,
    f: TrigSeries,
    S_values: Sequence[int],
    K: int | None = None,
    reference: str | PiecewiseSolution = "exact",
    n_probe: int = 2001,
    delta: float | None = None,
    eps: float = DEFAULT_EPS,
) -> ConvergenceTable:
    """Sup-distance between each frozen-coefficient solution and a reference.

    ``reference`` is ``"exact"`` (coefficients evaluated at every probe point),
    ``"finest"`` (the solution for the largest ``S``), or a solution to compare with.
    """
    S_values = [int(s) for s in S_values]
    if not S_values or any(s < 1 for s in S_values):
        raise ValueError(f"S values must be positive, got {S_values}")
    if any(b <= a for a, b in zip(S_values, S_values[1:])):
        raise ValueError(f"S values must be strictly increasing, got {S_values}")
    if delta is None:
        delta = DELTA_RTOL * l
    excluded = np.concatenate([uniform_partition(l, S).breakpoints for S in S_values])
    if isinstance(reference, PiecewiseSolution):
        excluded = np.concatenate([excluded, reference.partition.breakpoints])
    x = grid_points(l, n_probe, excluded, delta)

    sols = {}
    for S in S_values:
        try:
            sols[S] = build_psi_S(coeffs, l, f, S, K, eps)
        except SolvabilityError as exc:
            raise SolvabilityError(exc.report, f"{exc} (S={S})") from None

    if isinstance(reference, PiecewiseSolution):
        ref = reference(x)
    elif reference == "finest":
        ref = sols[S_values[-1]](x)
    elif reference == "exact":
        ref = pointwise_solution(coeffs, l, f, x, K, eps)
    else:
        raise ValueError(f"unknown reference {reference!r}")
    rows = tuple((S, float(np.max(np.abs(sols[S](x) - ref)))) for S in S_values)
    return ConvergenceTable(rows)


# ---------------------------------------------------------------------------
# independent oracles


def oracle_order2(a0: float, a2: float, f: TrigSeries) -> TrigSeries:
    """Particular solution of ``a0 Psi + a2 Psi'' = f`` by undetermined coefficients.

    Substituting ``a cos(kx') + b sin(kx')`` gives ``(a0 - a2 (k pi/l)^2)`` times
    the same harmonic, so each forcing harmonic is divided by that factor.
    """
    if a0 == 0:
        raise ValueError("a0 must be nonzero")
    c = np.array(f.cos, dtype=np.float64)
    d = np.array(f.sin, dtype=np.float64)
    out_c = np.zeros_like(c)
    out_d = np.zeros_like(d)
    bad = []
    for i in range(c.size):
        if c[i] == 0 and d[i] == 0:
            continue
        lam = (i + 1) * np.pi / f.l
        factor = a0 - a2 * lam * lam
        if factor == 0 or abs(factor) <= DEFAULT_EPS * max(1.0, abs(a0), abs(a2) * lam * lam):
            bad.append(Resonance(0, i + 1, float(factor), 0.0))
            continue
        out_c[i] = c[i] / factor
        out_d[i] = d[i] / factor
    if bad:
        raise SolvabilityError(SolvabilityReport(tuple(bad)))
    return TrigSeries(f.l, f.half_c0 / a0, out_c, out_d)


def fd_weights(offsets: Sequence[float], m: int) -> np.ndarray:
    """Fornberg weights: row ``n`` approximates the ``n``-th derivative at 0."""
    z = np.asarray(offsets, dtype=np.float64)
    N = z.size
    c = np.zeros((m + 1, N))
    c1 = 1.0
    c4 = z[0]
    c[0, 0] = 1.0
    for i in range(1, N):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = z[i]
        for j in range(i):
            c3 = z[i] - z[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def fd_residual_check(
    p: ODEProblem,
    sol: PiecewiseSolution,
    x: float,
    h: float,
    delta: float | None = None,
) -> float:
    """``|L Psi(x)|`` by central differences versus the exact series, absolute difference.

    Each derivative order ``n`` uses the second-order central stencil with
    ``(n + 1) // 2`` points on either side.
    """
    _check_structure(p, sol)
    if delta is None:
        delta = DELTA_RTOL * p.l
    reach = p.order * h + delta
    bp = sol.partition.breakpoints
    if np.min(np.abs(bp - x)) < reach:
        raise ValueError(f"finite-difference stencil around x={x!r} would cross a breakpoint")
    cell = int(sol.partition.locate(x))
    ts = sol.cells[cell]
    A = p.cell_coefficients(sol.partition)[cell]
    exact = apply_operator_constant(A, ts)(x)
    approx = 0.0
    for n, a in enumerate(A):
        if a == 0.0:
            continue
        r = (n + 1) // 2
        j = np.arange(-r, r + 1)
        w = fd_weights(j.astype(float), n)[n]
        approx += a * float(np.dot(w, ts(x + j * h))) / h**n
    return abs(approx - exact)
