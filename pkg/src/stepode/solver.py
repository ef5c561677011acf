"""Particular solutions of ``sum_n A_n(x) Psi^(n) = f`` with step-function coefficients.

On every cell of the common refinement of the coefficient partitions the
equation has constant coefficients, and harmonic ``k`` of the forcing is
inverted by the 2x2 rotation-scaling built from

    sigma_k = sum_n (-1)^n A_{2n}   (k pi / l)^{2n}
    omega_k = sum_n (-1)^n A_{2n+1} (k pi / l)^{2n+1}

A single-cell problem is the constant-coefficient case and goes through the
same code.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .stepfn import Partition, StepFunction, common_refinement, constant, discretize
from .trig import TrigSeries, combine, differentiate, zero_series

__all__ = [
    "DEFAULT_EPS",
    "NO_SOLUTION_MESSAGE",
    "ValidationError",
    "HypothesisError",
    "SolvabilityError",
    "ODEProblem",
    "PiecewiseSolution",
    "Resonance",
    "SolvabilityReport",
    "sigma",
    "omega",
    "check_solvability",
    "solve_constant",
    "solve_piecewise",
    "apply_operator_constant",
    "apply_operator_piecewise",
    "build_psi_S",
]

log = logging.getLogger(__name__)

DEFAULT_EPS = 1e-9

NO_SOLUTION_MESSAGE = (
    "the ordinary differential equation has no solution or has infinitely many solutions"
)


class ValidationError(ValueError):
    """An :class:`ODEProblem` violates one of its structural invariants."""


class HypothesisError(ValidationError):
    """The leading coefficient ``A_0`` vanishes somewhere."""


class SolvabilityError(ArithmeticError):
    def __init__(self, report: SolvabilityReport, message: str | None = None):
        self.report = report
        super().__init__(message or f"{NO_SOLUTION_MESSAGE}\n{report.describe()}")


@dataclass(frozen=True, eq=False)
class ODEProblem:
    l: float
    order: int
    coefficients: tuple[StepFunction, ...]
    forcing: TrigSeries

    def __post_init__(self):
        order = self.order
        if isinstance(order, float) and order.is_integer():
            order = int(order)
        if not isinstance(order, (int, np.integer)) or order < 0:
            raise ValidationError(f"order must be a non-negative integer, got {self.order!r}")
        if order % 2:
            raise ValidationError(f"order must be even, got {order}")
        l = float(self.l)
        coeffs = tuple(
            c if isinstance(c, StepFunction) else constant(float(c), l) for c in self.coefficients
        )
        if len(coeffs) != order + 1:
            raise ValidationError(
                f"an order-{order} problem needs {order + 1} coefficients, got {len(coeffs)}"
            )
        for n, c in enumerate(coeffs):
            if c.l != l:
                raise ValidationError(f"coefficient A_{n} has l={c.l!r}, problem has l={l!r}")
        if self.forcing.l != l:
            raise ValidationError(f"forcing has l={self.forcing.l!r}, problem has l={l!r}")
        zero = np.flatnonzero(coeffs[0].values == 0.0)
        if zero.size:
            bp = coeffs[0].partition.breakpoints
            k = int(zero[0])
            raise HypothesisError(f"A_0 is zero on cell [{bp[k]!r}, {bp[k + 1]!r})")
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def partition(self) -> Partition:
        """Common refinement of all coefficient partitions."""
        return common_refinement(self.coefficients)

    def cell_coefficients(self, partition: Partition | None = None) -> np.ndarray:
        """``(n_cells, order + 1)`` coefficient values at the cell midpoints."""
        part = self.partition if partition is None else partition
        mids = part.midpoints
        return np.column_stack([c(mids) for c in self.coefficients])

    def __eq__(self, other):
        if not isinstance(other, ODEProblem):
            return NotImplemented
        return (
            self.l == other.l
            and self.order == other.order
            and self.coefficients == other.coefficients
            and self.forcing == other.forcing
        )

    def __hash__(self):
        return hash((self.l, self.order, self.coefficients, self.forcing))


@dataclass(frozen=True, eq=False)
class PiecewiseSolution:
    partition: Partition
    cells: tuple[TrigSeries, ...]

    def __post_init__(self):
        cells = tuple(self.cells)
        if len(cells) != self.partition.n_cells:
            raise ValueError(
                f"{len(cells)} cell series for a partition with {self.partition.n_cells} cells"
            )
        if cells:
            l, K = cells[0].l, cells[0].K
            for s in cells:
                if s.l != l or s.K != K:
                    raise ValueError("all cell series must share l and K")
            if l != self.partition.l:
                raise ValueError("cell series and partition disagree on l")
        object.__setattr__(self, "cells", cells)

    @property
    def l(self) -> float:
        return self.partition.l

    @property
    def K(self) -> int:
        return self.cells[0].K

    def arrays(self):
        half = np.array([s.half_c0 for s in self.cells])
        C = np.array([s.cos for s in self.cells]).reshape(len(self.cells), self.K)
        D = np.array([s.sin for s in self.cells]).reshape(len(self.cells), self.K)
        return half, C, D

    def __call__(self, x):
        """Evaluate; at an interior breakpoint the right-hand cell is used."""
        x = np.asarray(x, dtype=np.float64)
        idx = self.partition.locate(x)
        half, C, D = self.arrays()
        out = kernels.eval_cells(idx, half, C, D, np.pi / self.l, x)
        return float(out) if out.ndim == 0 else out

    def __eq__(self, other):
        if not isinstance(other, PiecewiseSolution):
            return NotImplemented
        return self.partition == other.partition and self.cells == other.cells

    def __hash__(self):
        return hash((self.partition, self.cells))


@dataclass(frozen=True)
class Resonance:
    cell: int
    k: int
    sigma: float
    omega: float


@dataclass(frozen=True)
class SolvabilityReport:
    resonant_pairs: tuple[Resonance, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.resonant_pairs

    def describe(self) -> str:
        if self.ok:
            return "all active harmonics are non-resonant"
        return "\n".join(
            f"cell {r.cell}: harmonic k={r.k} has sigma={r.sigma!r}, omega={r.omega!r}"
            for r in self.resonant_pairs
        )


# ---------------------------------------------------------------------------
# symbols


def sigma(A: Sequence[float], k: int, l: float) -> float:
    s, _, _ = kernels.symbol_table(np.asarray(A, dtype=np.float64)[None, :], k, np.pi / l)
    return float(s[0, k - 1])


def omega(A: Sequence[float], k: int, l: float) -> float:
    _, o, _ = kernels.symbol_table(np.asarray(A, dtype=np.float64)[None, :], k, np.pi / l)
    return float(o[0, k - 1])


def _resonant_mask(sig, om, scale, eps):
    # sigma, omega are sums of terms of size `scale`; cancellation below
    # eps * scale is indistinguishable from an exact zero
    return np.hypot(sig, om) <= eps * np.maximum(1.0, scale)


def _active(f: TrigSeries) -> np.ndarray:
    return (f.cos != 0.0) | (f.sin != 0.0)


def _report(A: np.ndarray, f: TrigSeries, eps: float) -> SolvabilityReport:
    sig, om, scale = kernels.symbol_table(A, f.K, f.w)
    bad = _resonant_mask(sig, om, scale, eps) & _active(f)[None, :]
    pairs = tuple(
        Resonance(int(c), int(k) + 1, float(sig[c, k]), float(om[c, k]))
        for c, k in zip(*np.nonzero(bad))
    )
    return SolvabilityReport(pairs)


def check_solvability(p: ODEProblem, K: int | None = None, eps: float = DEFAULT_EPS) -> SolvabilityReport:
    f = p.forcing if K is None else p.forcing.resized(K)
    return _report(p.cell_coefficients(), f, eps)


# ---------------------------------------------------------------------------
# solving


def _solve_rows(A: np.ndarray, f: TrigSeries, eps: float):
    """Per-row particular solution coefficients for constant coefficient rows ``A``."""
    A0 = A[:, 0]
    if np.any(A0 == 0.0):
        raise HypothesisError(f"A_0 is zero on cell {int(np.flatnonzero(A0 == 0.0)[0])}")
    sig, om, scale = kernels.symbol_table(A, f.K, f.w)
    active = _active(f)
    bad = _resonant_mask(sig, om, scale, eps) & active[None, :]
    if np.any(bad):
        pairs = tuple(
            Resonance(int(c), int(k) + 1, float(sig[c, k]), float(om[c, k]))
            for c, k in zip(*np.nonzero(bad))
        )
        raise SolvabilityError(SolvabilityReport(pairs))
    c, d = f.cos[None, :], f.sin[None, :]
    denom = np.where(active[None, :], sig * sig + om * om, 1.0)
    alpha = np.where(active[None, :], (c * sig - d * om) / denom, 0.0)
    beta = np.where(active[None, :], (c * om + d * sig) / denom, 0.0)
    half = f.half_c0 / A0
    return half, alpha, beta


def solve_constant(A: Sequence[float], f: TrigSeries, eps: float = DEFAULT_EPS) -> TrigSeries:
    """Particular solution for constant coefficients ``A = (A_0, ..., A_2m)``."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    half, alpha, beta = _solve_rows(A, f, eps)
    return TrigSeries(f.l, half[0], alpha[0], beta[0])


def solve_piecewise(p: ODEProblem, K: int | None = None, eps: float = DEFAULT_EPS) -> PiecewiseSolution:
    """Cell-by-cell solution on the common refinement of the coefficient partitions.

    The forcing is truncated or zero-padded to ``K`` harmonics (default: its own K).
    """
    f = p.forcing if K is None else p.forcing.resized(K)
    part = p.partition
    A = p.cell_coefficients(part)
    try:
        half, alpha, beta = _solve_rows(A, f, eps)
    except SolvabilityError as exc:
        bp = part.breakpoints
        cells = sorted({r.cell for r in exc.report.resonant_pairs})
        where = ", ".join(f"[{bp[c]:.17g}, {bp[c + 1]:.17g})" for c in cells)
        raise SolvabilityError(exc.report, f"{exc} (cells {where})") from None
    log.debug("solved %d cells x %d harmonics", part.n_cells, f.K)
    cells = tuple(TrigSeries(f.l, half[i], alpha[i], beta[i]) for i in range(part.n_cells))
    return PiecewiseSolution(part, cells)


# ---------------------------------------------------------------------------
# operator application


def apply_operator_constant(
    A: Sequence[float], ts: TrigSeries, method: str = "differentiate"
) -> TrigSeries:
    """``sum_n A_n d^n/dx^n ts``.

    ``method="differentiate"`` sums literal term-by-term derivatives;
    ``method="symbols"`` maps harmonic ``(a, b) -> (a sigma + b omega, b sigma - a omega)``.
    """
    A = np.asarray(A, dtype=np.float64).ravel()
    if method == "differentiate":
        out = zero_series(ts.l, ts.K)
        for n, a in enumerate(A):
            if a != 0.0:
                out = combine(1.0, out, a, differentiate(ts, n))
        return out
    if method == "symbols":
        sig, om, _ = kernels.symbol_table(A[None, :], ts.K, ts.w)
        s, o = sig[0], om[0]
        a, b = ts.cos, ts.sin
        return TrigSeries(ts.l, A[0] * ts.half_c0 if A.size else 0.0, a * s + b * o, b * s - a * o)
    raise ValueError(f"unknown method {method!r}")


def apply_operator_piecewise(
    p: ODEProblem, sol: PiecewiseSolution, method: str = "differentiate"
) -> PiecewiseSolution:
    for n, c in enumerate(p.coefficients):
        if not sol.partition.refines(c.partition):
            raise ValueError(f"solution partition does not refine the partition of A_{n}")
    A = p.cell_coefficients(sol.partition)
    cells = tuple(apply_operator_constant(A[i], s, method) for i, s in enumerate(sol.cells))
    return PiecewiseSolution(sol.partition, cells)


# ---------------------------------------------------------------------------
# midpoint-frozen approximation of continuous coefficients


def build_psi_S(
    coeffs: Sequence[Callable | float],
    l: float,
    f: TrigSeries,
    S: int,
    K: int | None = None,
    eps: float = DEFAULT_EPS,
) -> PiecewiseSolution:
    """Solve with every coefficient frozen at the midpoints of ``S`` uniform cells."""
    steps = tuple(discretize(g, l, S) for g in coeffs)
    p = ODEProblem(l, len(steps) - 1, steps, f)
    return solve_piecewise(p, K, eps)
