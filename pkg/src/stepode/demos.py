"""Built-in problems.

``demo41``: order-22 equation on [-pi, pi) with step coefficients on the four
quarter cells and forcing ``1 + 2 cos x``.

``demo44``: ``Psi - Psi'' = 1/2 + sin x`` with constant coefficients.

``converge``: ``Psi - (2 + sin x)/1000 Psi'' = 1 + 2 cos x`` with a continuous
coefficient, used for the frozen-coefficient convergence study.
"""

import math

import numpy as np

from .solver import ODEProblem
from .stepfn import Partition, StepFunction, constant
from .trig import TrigSeries

__all__ = [
    "DEFAULT_HARMONICS",
    "QUARTERS",
    "DEMO41_STEPS",
    "demo41_problem",
    "demo44_problem",
    "converge_coefficients",
    "converge_forcing",
    "CONVERGE_SIZES",
]

DEFAULT_HARMONICS = 20

PI = math.pi
QUARTERS = (-PI, -PI / 2, 0.0, PI / 2, PI)

# derivative order -> value on each quarter cell
DEMO41_STEPS = {
    0: (1.0, 1.0, 1.0, 1.0),
    2: (-0.001, -0.002, -0.001, -0.002),
    5: (0.01, -0.01, 0.002, -0.002),
    14: (0.1, -0.1, -0.4, 0.007),
    20: (-0.01, 0.01, 0.002, -0.22),
    22: (0.001, -0.001, 0.0003, -0.0003),
}


def _forcing(half_c0, cos=(), sin=(), K=DEFAULT_HARMONICS):
    c = np.zeros(K)
    d = np.zeros(K)
    c[: len(cos)] = cos
    d[: len(sin)] = sin
    return TrigSeries(PI, half_c0, c, d)


def demo41_problem() -> ODEProblem:
    part = Partition(PI, QUARTERS)
    coeffs = [
        StepFunction(part, DEMO41_STEPS[n]) if n in DEMO41_STEPS else constant(0.0, PI)
        for n in range(23)
    ]
    return ODEProblem(PI, 22, tuple(coeffs), _forcing(1.0, cos=(2.0,)))


def demo44_problem() -> ODEProblem:
    coeffs = (constant(1.0, PI), constant(0.0, PI), constant(-1.0, PI))
    return ODEProblem(PI, 2, coeffs, _forcing(0.5, sin=(1.0,)))


CONVERGE_SIZES = (4, 8, 16, 32, 64)


def _a2(x):
    return -(2.0 + np.sin(x)) / 1000.0


def converge_coefficients():
    return (1.0, 0.0, _a2)


def converge_forcing(K: int = DEFAULT_HARMONICS) -> TrigSeries:
    return _forcing(1.0, cos=(2.0,), K=K)
