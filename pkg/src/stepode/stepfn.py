"""Partitions of [-l, l) and real-valued simple step functions on them."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BREAKPOINT_RTOL",
    "Partition",
    "StepFunction",
    "make_partition",
    "make_step",
    "constant",
    "eval_step",
    "common_refinement",
    "discretize",
    "uniform_partition",
]

#: Breakpoints closer than ``BREAKPOINT_RTOL * l`` are treated as equal.
BREAKPOINT_RTOL = 1e-12


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Partition:
    """Breakpoints ``-l = a_0 < a_1 < ... < a_s = l`` of the half-open domain.

    Cell ``k`` (zero based) is ``[a_k, a_{k+1})``.
    """

    l: float
    breakpoints: np.ndarray

    def __post_init__(self):
        l = float(self.l)
        if not np.isfinite(l) or l <= 0:
            raise ValueError(f"half-length l must be positive and finite, got {self.l!r}")
        bp = np.array(self.breakpoints, dtype=np.float64).ravel()
        if bp.size < 2:
            raise ValueError("a partition needs at least two breakpoints")
        if not np.all(np.isfinite(bp)):
            raise ValueError("breakpoints must be finite")
        tol = BREAKPOINT_RTOL * l
        if abs(bp[0] + l) > tol or abs(bp[-1] - l) > tol:
            raise ValueError(
                f"breakpoints must start at -l and end at l (l={l!r}), got {bp[0]!r} .. {bp[-1]!r}"
            )
        # endpoints written in text may differ from +-l in the last bits
        bp[0], bp[-1] = -l, l
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "breakpoints", _frozen(bp))

    @property
    def n_cells(self) -> int:
        return self.breakpoints.size - 1

    @property
    def interior(self) -> np.ndarray:
        return self.breakpoints[1:-1]

    @property
    def midpoints(self) -> np.ndarray:
        bp = self.breakpoints
        return 0.5 * (bp[:-1] + bp[1:])

    def locate(self, x) -> np.ndarray:
        """Cell index of every ``x`` (half-open, right-continuous)."""
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < -self.l) or np.any(x >= self.l):
            bad = x[(x < -self.l) | (x >= self.l)].ravel()[0]
            raise ValueError(f"x={bad!r} is outside the domain [-{self.l!r}, {self.l!r})")
        return np.searchsorted(self.breakpoints, x, side="right") - 1

    def refines(self, other: Partition) -> bool:
        """True when every breakpoint of ``other`` is (within tolerance) one of ours."""
        if not np.isclose(self.l, other.l, rtol=0, atol=BREAKPOINT_RTOL * self.l):
            return False
        tol = BREAKPOINT_RTOL * self.l
        pos = np.searchsorted(self.breakpoints, other.breakpoints)
        for p, b in zip(pos, other.breakpoints):
            near = [self.breakpoints[j] for j in (p - 1, p) if 0 <= j < self.breakpoints.size]
            if min(abs(b - a) for a in near) > tol:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.l == other.l and np.array_equal(self.breakpoints, other.breakpoints)

    def __hash__(self):
        return hash((self.l, self.breakpoints.tobytes()))


@dataclass(frozen=True, eq=False)
class StepFunction:
    """``x -> values[k]`` on cell ``k`` of ``partition``."""

    partition: Partition
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64).ravel()
        if vals.size != self.partition.n_cells:
            raise ValueError(
                f"{vals.size} values given for a partition with {self.partition.n_cells} cells"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("step function values must be finite")
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def l(self) -> float:
        return self.partition.l

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = self.values[self.partition.locate(x)]
        return float(out) if out.ndim == 0 else out

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self.partition == other.partition and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.partition, self.values.tobytes()))

    def on(self, partition: Partition) -> StepFunction:
        """Re-express on a refinement by sampling at its cell midpoints."""
        return StepFunction(partition, self(partition.midpoints))

    def to_dict(self) -> dict:
        return {
            "breakpoints": [float(b) for b in self.partition.breakpoints],
            "values": [float(v) for v in self.values],
        }


def make_partition(breakpoints: Sequence[float], l: float | None = None) -> Partition:
    bp = np.asarray(breakpoints, dtype=np.float64).ravel()
    if bp.size < 2:
        raise ValueError("a partition needs at least two breakpoints")
    if l is None:
        l = float(bp[-1])
    return Partition(l, bp)


def make_step(partition: Partition | Sequence[float], values: Sequence[float]) -> StepFunction:
    if not isinstance(partition, Partition):
        partition = make_partition(partition)
    return StepFunction(partition, values)


def constant(c: float, l: float) -> StepFunction:
    """Single-cell step function equal to ``c`` on [-l, l)."""
    return StepFunction(Partition(l, [-l, l]), [c])


def eval_step(f: StepFunction, x: float) -> float:
    return f(x)


def uniform_partition(l: float, S: int) -> Partition:
    """Cells ``[l(2s-S)/S, l(2s+2-S)/S)`` for ``s = 0..S-1``."""
    if S < 1:
        raise ValueError(f"S must be >= 1, got {S}")
    s = np.arange(S + 1)
    return Partition(l, l * (2 * s - S) / S)


def common_refinement(fs: Sequence[StepFunction | Partition]) -> Partition:
    """Sorted union of all breakpoints, merging those within tolerance."""
    parts = [f.partition if isinstance(f, StepFunction) else f for f in fs]
    if not parts:
        raise ValueError("common_refinement needs at least one input")
    l = parts[0].l
    for p in parts[1:]:
        if p.l != l:
            raise ValueError(f"mismatched half-lengths: {l!r} and {p.l!r}")
    tol = BREAKPOINT_RTOL * l
    merged = np.sort(np.concatenate([p.breakpoints for p in parts]))
    keep = [merged[0]]
    for b in merged[1:]:
        if b - keep[-1] > tol:
            keep.append(b)
    # the endpoint must stay exactly l even if an interior point was within tol
    keep[-1] = l
    return Partition(l, keep)


def discretize(g: Callable[[float], float] | float, l: float, S: int) -> StepFunction:
    """Freeze ``g`` at the midpoint ``l(2s+1-S)/S`` of each of ``S`` uniform cells."""
    part = uniform_partition(l, S)
    mids = l * (2 * np.arange(S) + 1 - S) / S
    if callable(g):
        vals = [float(g(m)) for m in mids]
    else:
        vals = [float(g)] * S
    return StepFunction(part, vals)
