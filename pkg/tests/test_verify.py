import math

import numpy as np
import pytest

from conftest import random_problem, random_series
from stepode.demos import converge_coefficients, converge_forcing, demo41_problem, demo44_problem
from stepode.solver import ODEProblem, PiecewiseSolution, SolvabilityError, solve_constant, solve_piecewise
from stepode.stepfn import Partition, constant
from stepode.trig import TrigSeries, zero_series
from stepode.verify import (
    ConvergenceTable,
    convergence_study,
    fd_residual_check,
    fd_weights,
    grid_points,
    oracle_order2,
    pointwise_solution,
    residual_grid,
)

PI = math.pi


def test_residual_demo44():
    p = demo44_problem()
    rep = residual_grid(p, solve_piecewise(p, 20), 200, 1e-6)
    assert rep.sup_norm <= 1e-10
    assert rep.grid.size == 198


def test_residual_demo41_paper_grid():
    p = demo41_problem()
    sol = solve_piecewise(p, 20)
    rep = residual_grid(p, sol, 201)
    assert rep.sup_norm <= 1e-8
    assert np.allclose(np.diff(rep.grid).min(), PI / 100)
    for b in (-PI / 2, 0.0, PI / 2, -PI, PI):
        assert np.min(np.abs(rep.grid - b)) > 1e-9 * PI


def test_residual_zero_solution_is_minus_forcing():
    p = demo44_problem()
    zero = PiecewiseSolution(Partition(PI, [-PI, PI]), (zero_series(PI, 20),))
    rep = residual_grid(p, zero, 300)
    assert rep.sup_norm == pytest.approx(np.max(np.abs(p.forcing(rep.grid))), rel=1e-15)


def test_residual_norms_consistent():
    p = demo41_problem()
    rep = residual_grid(p, solve_piecewise(p), 500)
    assert rep.sup_norm == np.max(np.abs(rep.residuals))
    assert rep.l2_norm == pytest.approx(np.sqrt(np.mean(rep.residuals**2)), abs=1e-14)
    d = rep.to_dict()
    assert set(d) == {"grid", "residuals", "sup_norm", "l2_norm"}


def test_residual_delta_too_large():
    p = demo44_problem()
    with pytest.raises(ValueError, match="excludes every"):
        residual_grid(p, solve_piecewise(p), 5, delta=10.0)


def test_residual_grid_excludes_breakpoints_even_when_hit():
    # 401 points on [-pi, pi] put grid nodes exactly on -pi/2, 0, pi/2
    p = demo41_problem()
    rep = residual_grid(p, solve_piecewise(p), 401)
    assert rep.grid.size == 401 - 5
    assert not np.any(np.isclose(rep.grid, [[-PI / 2], [0.0], [PI / 2]], rtol=0, atol=1e-12))


def test_residual_random_family(rng):
    for _ in range(40):
        p = random_problem(rng)
        rep = residual_grid(p, solve_piecewise(p), 400)
        assert rep.sup_norm <= 1e-8


def test_grid_points():
    x = grid_points(1.0, 5, [0.0], 1e-9)
    assert np.array_equal(x, [-0.5, 0.5])


# -- oracle -------------------------------------------------------------------


def _series(half=0.0, cos=(), sin=(), K=4, l=PI):
    c = np.zeros(K)
    d = np.zeros(K)
    c[: len(cos)] = cos
    d[: len(sin)] = sin
    return TrigSeries(l, half, c, d)


def test_oracle_examples():
    assert oracle_order2(1, -1, _series(0.5, sin=(1.0,))) == _series(0.5, sin=(0.5,))
    assert oracle_order2(1, -1, zero_series(PI, 4)) == zero_series(PI, 4)
    f = _series(0.3, cos=(1, 2), sin=(3, 4))
    assert oracle_order2(1, 0, f) == f


def test_oracle_errors():
    with pytest.raises(ValueError):
        oracle_order2(0, 1, _series(1.0))
    with pytest.raises(SolvabilityError):
        oracle_order2(1, 1, _series(cos=(1.0,)))


def test_oracle_agrees_with_solver(rng):
    for _ in range(100):
        l = float(rng.uniform(0.5, 4))
        a0 = float(rng.uniform(0.5, 2)) * rng.choice([-1, 1])
        a2 = float(rng.uniform(-1, 1))
        f = random_series(rng, l, int(rng.integers(1, 33)))
        a = oracle_order2(a0, a2, f).coefficients()
        b = solve_constant([a0, 0.0, a2], f).coefficients()
        assert np.allclose(a, b, rtol=1e-12, atol=0)


# -- finite differences --------------------------------------------------------


def test_fd_weights_classic():
    w = fd_weights([-1, 0, 1], 2)
    assert np.allclose(w[1], [-0.5, 0, 0.5])
    assert np.allclose(w[2], [1, -2, 1])
    w4 = fd_weights([-2, -1, 0, 1, 2], 4)[4]
    assert np.allclose(w4, [1, -4, 6, -4, 1])


def _order2_problem(K=4):
    f = TrigSeries(PI, 0.2, np.linspace(1, 0.25, K), np.linspace(-0.5, 0.5, K))
    return ODEProblem(PI, 2, (1.5, 0.3, -0.7), f)


def test_fd_order2():
    p = _order2_problem()
    sol = solve_piecewise(p)
    assert fd_residual_check(p, sol, 0.7, 1e-4) <= 1e-6


def test_fd_order0():
    p = ODEProblem(PI, 0, (2.0,), TrigSeries(PI, 1.0, [0.5, 0.1], [0.2, -1]))
    assert fd_residual_check(p, solve_piecewise(p), 1.1, 1e-3) <= 1e-13


def test_fd_constant_solution():
    p = ODEProblem(PI, 4, (2.0, 0.5, 0.1, 0.3, 0.2), TrigSeries(PI, 3.0, [0.0], [0.0]))
    sol = solve_piecewise(p)
    assert fd_residual_check(p, sol, -0.4, 1e-2) <= 1e-12


def test_fd_error_shrinks_with_h():
    p = _order2_problem(K=4)
    sol = solve_piecewise(p)
    for x in (-2.0, 0.3, 1.9):
        coarse = fd_residual_check(p, sol, x, 1e-3)
        fine = fd_residual_check(p, sol, x, 1e-4)
        assert coarse / fine >= 2


def test_fd_stencil_crossing_breakpoint():
    p = demo41_problem()
    sol = solve_piecewise(p)
    with pytest.raises(ValueError, match="cross a breakpoint"):
        fd_residual_check(p, sol, 1e-3, 1e-4)


def test_fd_on_step_problem():
    # order-2 step problem, away from the breakpoint
    from stepode.stepfn import StepFunction

    a2 = StepFunction(Partition(PI, [-PI, 0, PI]), [-0.5, -1.5])
    p = ODEProblem(PI, 2, (1.0, 0.0, a2), TrigSeries(PI, 0.5, [1.0, 0.5], [0.0, 1.0]))
    sol = solve_piecewise(p)
    assert fd_residual_check(p, sol, -1.5, 1e-4) <= 1e-6
    assert fd_residual_check(p, sol, 1.5, 1e-4) <= 1e-6


# -- convergence ---------------------------------------------------------------


def test_convergence_constant_coefficients():
    f = TrigSeries(PI, 0.5, [0.0, 1.0], [1.0, 0.0])
    table = convergence_study((1.0, 0.0, -1.0), PI, f, (1, 2, 4, 8), 2)
    assert np.all(table.distances <= 1e-12)


def test_convergence_variable_coefficient():
    table = convergence_study(converge_coefficients(), PI, converge_forcing(), (4, 8, 16, 32, 64), 20)
    d = table.distances
    assert np.all(np.diff(d) < 0)
    assert np.mean(table.ratios()) >= 1.5


def test_convergence_finest_single_entry():
    table = convergence_study(converge_coefficients(), PI, converge_forcing(), (8,), 20, reference="finest")
    assert table.rows == ((8, 0.0),)


def test_convergence_explicit_reference():
    ref = solve_piecewise(demo44_problem(), 20)
    f = demo44_problem().forcing
    table = convergence_study((1.0, 0.0, -1.0), PI, f, (2, 4), 20, reference=ref)
    assert np.all(table.distances <= 1e-12)


def test_convergence_rejects_bad_sizes():
    with pytest.raises(ValueError):
        convergence_study((1.0,), PI, converge_forcing(), (8, 4))
    with pytest.raises(ValueError):
        ConvergenceTable(((4, 1.0), (4, 0.5)))
    with pytest.raises(ValueError):
        convergence_study((1.0,), PI, converge_forcing(), (4,), reference="bogus")


def test_convergence_resonant_annotated_with_s():
    # A_2 = 1 gives sigma_1 = 1 - 1 = 0 for every S
    with pytest.raises(SolvabilityError, match="S=2"):
        convergence_study((1.0, 0.0, 1.0), PI, converge_forcing(), (2, 4))


def test_pointwise_solution_matches_closed_form():
    x = np.linspace(-3, 3, 41)
    a2 = converge_coefficients()[2]
    got = pointwise_solution(converge_coefficients(), PI, converge_forcing(), x)
    sigma1 = 1.0 - a2(x)
    assert np.allclose(got, 1.0 + 2.0 * np.cos(x) / sigma1, rtol=0, atol=1e-14)
