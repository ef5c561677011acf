import math

import numpy as np
import pytest

from stepode.solver import ODEProblem, check_solvability
from stepode.stepfn import Partition, StepFunction
from stepode.trig import TrigSeries

PI = math.pi


def random_series(rng, l, K, scale=1.0):
    return TrigSeries(l, rng.uniform(-scale, scale), rng.uniform(-scale, scale, K), rng.uniform(-scale, scale, K))


def random_partition(rng, l, max_cells):
    s = int(rng.integers(1, max_cells + 1))
    inner = np.sort(rng.uniform(-l, l, s - 1))
    return Partition(l, np.concatenate([[-l], inner, [l]]))


def random_problem(rng, *, orders=(2, 4, 6, 8, 10), max_K=32, max_cells=6, l=None):
    """Random non-resonant problem: A_0 in [0.5, 2], other coefficients in [-1, 1]."""
    while True:
        order = int(rng.choice(orders))
        K = int(rng.integers(1, max_K + 1))
        ll = float(rng.uniform(0.5, 4.0)) if l is None else l
        coeffs = []
        for n in range(order + 1):
            part = random_partition(rng, ll, max_cells)
            if n == 0:
                vals = rng.uniform(0.5, 2.0, part.n_cells)
            else:
                vals = rng.uniform(-1.0, 1.0, part.n_cells)
            coeffs.append(StepFunction(part, vals))
        p = ODEProblem(ll, order, tuple(coeffs), random_series(rng, ll, K))
        if check_solvability(p).ok:
            return p


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


# -- acceptance summary: one line per criterion ----------------------------------

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and description")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    n, text = marker.args
    passed = call.excinfo is None
    prev = _ACCEPTANCE.get(n, (text, True))
    _ACCEPTANCE[n] = (text, prev[1] and passed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        text, ok = _ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {text}")
