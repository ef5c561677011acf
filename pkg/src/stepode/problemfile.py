"""JSON problem files.

Layout::

    {"l": 3.14159..., "order": 2,
     "coefficients": [1, 0, {"breakpoints": [...], "values": [...]}],
     "forcing": {"half_c0": 0.5, "cos": [...], "sin": [...]},
     "harmonics": 20}

A coefficient may be a bare number (a constant), a step function object, or,
for continuous-coefficient files only, ``{"expr": "-(2 + sin(x))/1000"}``.
The forcing may be ``{"samples": [...]}`` on the grid ``-l + 2lj/Q``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .solver import ODEProblem, ValidationError
from .stepfn import Partition, StepFunction, constant
from .trig import TrigSeries, analyze_samples

__all__ = [
    "ProblemFileError",
    "parse_problem",
    "load_problem",
    "load_continuous",
    "problem_to_dict",
    "save_problem",
    "dumps",
]


class ProblemFileError(ValidationError):
    pass


def _read(path) -> dict:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ProblemFileError(f"{path}: top level must be a JSON object")
    return data


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProblemFileError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _header(data: dict, src: str):
    for key in ("l", "order", "coefficients", "forcing"):
        if key not in data:
            raise ProblemFileError(f"{src}: missing field {key!r}")
    l = _number(data["l"], f"{src}: l")
    if not l > 0 or l == float("inf"):
        raise ProblemFileError(f"{src}: l: half-length must be positive and finite, got {l!r}")
    order = data["order"]
    if isinstance(order, bool) or not isinstance(order, int):
        raise ProblemFileError(f"{src}: order: expected an integer, got {order!r}")
    if order % 2:
        raise ProblemFileError(f"{src}: order must be even, got {order}")
    coeffs = data["coefficients"]
    if not isinstance(coeffs, list):
        raise ProblemFileError(f"{src}: coefficients: expected a list")
    K = data.get("harmonics")
    if K is not None and (isinstance(K, bool) or not isinstance(K, int) or K < 1):
        raise ProblemFileError(f"{src}: harmonics: expected a positive integer, got {K!r}")
    return l, order, coeffs, K


def _step(entry, l: float, where: str) -> StepFunction:
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return constant(float(entry), l)
    if isinstance(entry, dict) and "breakpoints" in entry and "values" in entry:
        bp = [_number(b, f"{where}.breakpoints[{i}]") for i, b in enumerate(entry["breakpoints"])]
        vals = [_number(v, f"{where}.values[{i}]") for i, v in enumerate(entry["values"])]
        try:
            return StepFunction(Partition(l, bp), vals)
        except ValueError as exc:
            raise ProblemFileError(f"{where}: {exc}") from None
    raise ProblemFileError(f"{where}: expected a number or a step function object, got {entry!r}")


def _expr(text: str, where: str):
    try:
        import sympy
    except ImportError:  # pragma: no cover
        raise ProblemFileError(f"{where}: expression coefficients need sympy installed") from None
    x = sympy.Symbol("x")
    try:
        e = sympy.sympify(text, locals={"x": x})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ProblemFileError(f"{where}: cannot parse expression {text!r}: {exc}") from None
    extra = e.free_symbols - {x}
    if extra:
        raise ProblemFileError(f"{where}: unknown symbols {sorted(map(str, extra))} in {text!r}")
    return sympy.lambdify(x, e, "numpy")


def _forcing(entry, l: float, K: int | None, where: str) -> TrigSeries:
    if not isinstance(entry, dict):
        raise ProblemFileError(f"{where}: expected an object")
    if "samples" in entry:
        samples = [_number(v, f"{where}.samples[{i}]") for i, v in enumerate(entry["samples"])]
        try:
            return analyze_samples(samples, l, K or 20)
        except ValueError as exc:
            raise ProblemFileError(f"{where}: {exc}") from None
    cos = [_number(v, f"{where}.cos[{i}]") for i, v in enumerate(entry.get("cos", []))]
    sin = [_number(v, f"{where}.sin[{i}]") for i, v in enumerate(entry.get("sin", []))]
    n = max(len(cos), len(sin))
    cos += [0.0] * (n - len(cos))
    sin += [0.0] * (n - len(sin))
    half = _number(entry.get("half_c0", 0.0), f"{where}.half_c0")
    try:
        return TrigSeries(l, half, cos, sin)
    except ValueError as exc:
        raise ProblemFileError(f"{where}: {exc}") from None


def parse_problem(data: dict, src: str = "<problem>") -> tuple[ODEProblem, int | None]:
    """Build the problem and return it with the file's ``harmonics`` (or None)."""
    l, order, coeffs, K = _header(data, src)
    steps = tuple(_step(c, l, f"{src}: coefficients[{i}]") for i, c in enumerate(coeffs))
    forcing = _forcing(data["forcing"], l, K, f"{src}: forcing")
    try:
        return ODEProblem(l, order, steps, forcing), K
    except ValidationError as exc:
        raise ProblemFileError(f"{src}: {exc}") from None


def load_problem(path) -> tuple[ODEProblem, int | None]:
    return parse_problem(_read(path), str(path))


def load_continuous(path):
    """Continuous-coefficient file for the convergence study.

    Returns ``(coeffs, l, forcing, harmonics)`` where ``coeffs`` are floats or
    vectorized callables.
    """
    src = str(path)
    data = _read(path)
    l, order, entries, K = _header(data, src)
    if len(entries) != order + 1:
        raise ProblemFileError(
            f"{src}: an order-{order} problem needs {order + 1} coefficients, got {len(entries)}"
        )
    coeffs = []
    for i, c in enumerate(entries):
        where = f"{src}: coefficients[{i}]"
        if isinstance(c, dict) and "expr" in c:
            coeffs.append(_expr(str(c["expr"]), where))
        elif isinstance(c, dict):
            coeffs.append(_step(c, l, where))
        else:
            coeffs.append(_number(c, where))
    forcing = _forcing(data["forcing"], l, K, f"{src}: forcing")
    return tuple(coeffs), l, forcing, K


def problem_to_dict(p: ODEProblem, harmonics: int | None = None) -> dict:
    coeffs = []
    for c in p.coefficients:
        if c.partition.n_cells == 1:
            coeffs.append(float(c.values[0]))
        else:
            coeffs.append(c.to_dict())
    out = {
        "l": p.l,
        "order": p.order,
        "coefficients": coeffs,
        "forcing": p.forcing.to_dict(),
    }
    if harmonics is not None:
        out["harmonics"] = int(harmonics)
    return out


def dumps(p: ODEProblem, harmonics: int | None = None) -> str:
    return json.dumps(problem_to_dict(p, harmonics), indent=1) + "\n"


def save_problem(p: ODEProblem, path, harmonics: int | None = None) -> None:
    Path(path).write_text(dumps(p, harmonics))
