"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 no unique solution (resonance),
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import demos
from .problemfile import load_continuous, load_problem, save_problem
from .solver import (
    DEFAULT_EPS,
    NO_SOLUTION_MESSAGE,
    ODEProblem,
    PiecewiseSolution,
    SolvabilityError,
    ValidationError,
    check_solvability,
    solve_piecewise,
)
from .verify import DELTA_RTOL, convergence_study, grid_points, residual_grid

__all__ = ["RunConfig", "emit_table", "run", "main", "load_problem", "EXIT_OK"]

log = logging.getLogger("stepode")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVABILITY = 3
EXIT_IO = 4

SUBCOMMANDS = ("solve", "verify", "converge", "demo41", "demo44")
DEFAULT_GRID = 629


@dataclass
class RunConfig:
    subcommand: str
    problem_path: str | None = None
    harmonics: int | None = None
    grid: int = DEFAULT_GRID
    delta: float | None = None
    eps: float = DEFAULT_EPS
    output_path: str | None = None
    format: str = "csv"
    sizes: tuple[int, ...] = demos.CONVERGE_SIZES
    reference: str = "exact"
    dump_problem: str | None = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValidationError(f"unknown subcommand {self.subcommand!r}")
        if self.harmonics is not None and self.harmonics < 1:
            raise ValidationError(f"harmonics must be >= 1, got {self.harmonics}")
        if self.grid < 1:
            raise ValidationError(f"grid must be >= 1, got {self.grid}")
        if self.format not in ("csv", "json"):
            raise ValidationError(f"format must be csv or json, got {self.format!r}")


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def emit_table(rows, format: str = "csv", path=None, columns=("x", "psi")) -> str:
    """Write rows as CSV or JSON columns; ``path=None`` writes to stdout.

    Floats use the shortest representation that round-trips exactly.
    """
    rows = [tuple(r) for r in rows]
    if not rows:
        raise ValueError("emit_table needs at least one row")
    columns = tuple(columns[: len(rows[0])])
    if format == "csv":
        lines = [",".join(columns)]
        lines += [",".join(_fmt(v) for v in r) for r in rows]
        text = "\n".join(lines) + "\n"
    elif format == "json":
        cols = {name: [r[i] for r in rows] for i, name in enumerate(columns)}
        cols = {k: [int(v) if isinstance(v, (int, np.integer)) else float(v) for v in vs] for k, vs in cols.items()}
        text = json.dumps(cols) + "\n"
    else:
        raise ValueError(f"unknown format {format!r}")
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
    return text


def _harmonics(config: RunConfig, from_file: int | None) -> int:
    if config.harmonics is not None:
        return config.harmonics
    return from_file or demos.DEFAULT_HARMONICS


def _describe_cells(sol: PiecewiseSolution, limit: int = 6) -> str:
    bp = sol.partition.breakpoints
    lines = []
    for i, s in enumerate(sol.cells):
        terms = [f"half_c0={float(s.half_c0)!r}"]
        for k in np.flatnonzero((s.cos != 0) | (s.sin != 0))[:limit]:
            terms.append(f"c_{k + 1}={float(s.cos[k])!r} d_{k + 1}={float(s.sin[k])!r}")
        lines.append(f"cell [{bp[i]:.6g}, {bp[i + 1]:.6g}): " + " ".join(terms))
    return "\n".join(lines)


def _solve_and_emit(p: ODEProblem, K: int, config: RunConfig, verify: bool) -> None:
    report = check_solvability(p, K, config.eps)
    if not report.ok:
        raise SolvabilityError(report)
    sol = solve_piecewise(p, K, config.eps)
    delta = config.delta if config.delta is not None else DELTA_RTOL * p.l
    if verify:
        rep = residual_grid(p, sol, config.grid, delta)
        x = rep.grid
        rows = zip(x, sol(x), rep.residuals)
        emit_table(rows, config.format, config.output_path, ("x", "psi", "residual"))
        print(f"sup_norm={rep.sup_norm!r} l2_norm={rep.l2_norm!r} points={x.size}", file=sys.stderr)
    else:
        x = grid_points(p.l, config.grid, sol.partition.breakpoints, delta)
        emit_table(zip(x, sol(x)), config.format, config.output_path, ("x", "psi"))
    print(_describe_cells(sol), file=sys.stderr)


def _converge(config: RunConfig) -> None:
    if config.problem_path is None:
        coeffs = demos.converge_coefficients()
        l = np.pi
        K = _harmonics(config, None)
        f = demos.converge_forcing(K)
    else:
        coeffs, l, f, K_file = load_continuous(config.problem_path)
        K = _harmonics(config, K_file)
    table = convergence_study(coeffs, l, f, config.sizes, K, config.reference, eps=config.eps)
    emit_table(table.rows, config.format, config.output_path, ("S", "distance"))
    if len(table.rows) > 1:
        print(f"mean_ratio={float(np.mean(table.ratios()))!r}", file=sys.stderr)


def run(config: RunConfig) -> int:
    t0 = time.perf_counter()
    try:
        if config.subcommand == "converge":
            _converge(config)
        else:
            if config.subcommand == "demo41":
                p, K_file = demos.demo41_problem(), None
            elif config.subcommand == "demo44":
                p, K_file = demos.demo44_problem(), None
            else:
                if config.problem_path is None:
                    raise ValidationError(f"{config.subcommand} needs --problem")
                p, K_file = load_problem(config.problem_path)
            K = _harmonics(config, K_file)
            if config.dump_problem:
                save_problem(p, config.dump_problem, K)
            verify = config.subcommand != "solve"
            _solve_and_emit(p, K, config, verify)
    except SolvabilityError as exc:
        print(f"error: {NO_SOLUTION_MESSAGE}", file=sys.stderr)
        print(exc.report.describe(), file=sys.stderr)
        return EXIT_SOLVABILITY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    log.info("%s finished in %.3fs", config.subcommand, time.perf_counter() - t0)
    return EXIT_OK


def _sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", dest="problem_path", help="problem JSON file")
    common.add_argument("--harmonics", type=int, help="number of harmonics K (default: file or 20)")
    common.add_argument("--grid", type=int, default=DEFAULT_GRID, help="uniform grid points on [-l, l]")
    common.add_argument("--delta", type=float, help="breakpoint exclusion radius (default 1e-9 l)")
    common.add_argument("--eps", type=float, default=DEFAULT_EPS, help="resonance tolerance")
    common.add_argument("--out", dest="output_path", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="stepode",
        description="Particular solutions of linear ODEs with step-function coefficients.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("solve", parents=[common], help="tabulate the solution")
    sub.add_parser("verify", parents=[common], help="tabulate solution and residual")
    conv = sub.add_parser("converge", parents=[common], help="frozen-coefficient convergence table")
    conv.add_argument("--sizes", type=_sizes, default=demos.CONVERGE_SIZES, help="e.g. 4,8,16,32,64")
    conv.add_argument("--reference", choices=("exact", "finest"), default="exact")
    for name, text in (("demo41", "order-22 step-coefficient demo"), ("demo44", "Psi - Psi'' demo")):
        d = sub.add_parser(name, parents=[common], help=text)
        d.add_argument("--dump-problem", help="write the embedded problem as JSON")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = RunConfig(
            subcommand=args.subcommand,
            problem_path=args.problem_path,
            harmonics=args.harmonics,
            grid=args.grid,
            delta=args.delta,
            eps=args.eps,
            output_path=args.output_path,
            format=args.format,
            sizes=getattr(args, "sizes", demos.CONVERGE_SIZES),
            reference=getattr(args, "reference", "exact"),
            dump_problem=getattr(args, "dump_problem", None),
        )
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
