"""LP kernel: exactness, certificates, double/exact agreement."""

import numpy as np
import pytest

from triloc.rational import rat
from triloc.solver import (DimensionMismatch, LpProblem, residual_primal,
                           solve_certified, solve_double, solve_exact,
                           verify_dual, verify_farkas, verify_primal)
from triloc.vertices import enumerate_local, enumerate_ns2, pr_box_variants, \
    pr_product_point


def hull_problem(points, target, mode="rational"):
    # weights over `points` reproducing `target`, plus normalization
    cols = [p.flat() for p in points]
    prob = LpProblem(len(cols), mode)
    for i in range(64):
        prob.add_row({j: col[i] for j, col in enumerate(cols)}, target[i])
    prob.add_row({j: 1 for j in range(len(cols))}, 1)
    return prob


@pytest.mark.parametrize("mode", ["rational", "double"])
def test_single_variable_equality(mode):
    prob = LpProblem(1, mode)
    prob.set_objective({0: 1})
    prob.add_row({0: 1}, 1)
    out = (solve_exact if mode == "rational" else solve_double)(prob)
    assert out.status == "optimal"
    assert out.value == 1
    assert out.x[0] == 1


def test_uniform_point_in_local_hull():
    locals_ = enumerate_local().points
    n = len(locals_)
    uniform = [rat(1, 8)] * 64
    prob = hull_problem(locals_, uniform)
    out = solve_exact(prob)
    assert out.status == "optimal"
    assert sum(out.x) == 1
    assert min(out.x) >= 0
    worst, xmin = residual_primal(prob, out.x)
    assert worst == 0 and xmin >= 0


def test_pr_product_not_in_local_hull_farkas():
    locals_ = enumerate_local().points
    box = pr_box_variants()[0]
    target = pr_product_point("AB|C", box, (0, 0)).flat()
    prob = hull_problem(locals_, target)
    out = solve_exact(prob)
    assert out.status == "infeasible"
    assert verify_farkas(prob, out.farkas)


def test_exact_optimum_has_zero_residual_and_no_duality_gap():
    vs = enumerate_ns2()
    rng = np.random.default_rng(0)
    prob = hull_problem(vs.points, [rat(1, 8)] * 64)
    prob.set_objective({j: rat(int(k), 16)
                        for j, k in enumerate(rng.integers(-8, 9, len(vs)))})
    out = solve_exact(prob)
    assert out.status == "optimal"
    assert verify_primal(prob, out.x)
    assert verify_dual(prob, out.y)
    ydotb = sum(yi * bi for yi, bi in zip(out.y, prob.rhs))
    assert ydotb == out.value


def test_double_agrees_with_exact():
    vs = enumerate_ns2()
    rng = np.random.default_rng(1)
    coeffs = {j: rat(int(k), 16)
              for j, k in enumerate(rng.integers(-8, 9, len(vs)))}
    exact = hull_problem(vs.points, [rat(1, 8)] * 64)
    exact.set_objective(coeffs)
    dbl = hull_problem(vs.points, [1.0 / 8] * 64, mode="double")
    dbl.set_objective({j: float(v) for j, v in coeffs.items()})
    eo = solve_exact(exact)
    do = solve_double(dbl)
    assert eo.status == do.status == "optimal"
    assert abs(float(eo.value) - do.value) <= 1e-7 * max(1, abs(do.value))


def test_exact_solve_is_deterministic():
    vs = enumerate_ns2()
    runs = []
    for _ in range(2):
        prob = hull_problem(vs.points, [rat(1, 8)] * 64)
        prob.set_objective({0: 1, 80: rat(1, 3)})
        runs.append(solve_exact(prob))
    assert runs[0].value == runs[1].value
    assert runs[0].x == runs[1].x


def test_unbounded_detection():
    prob = LpProblem(2, "rational")
    prob.set_objective({0: 1})
    prob.add_row({0: 1, 1: -1}, 0)
    out = solve_exact(prob)
    assert out.status == "unbounded"


def test_dimension_mismatch():
    prob = LpProblem(3, "rational")
    with pytest.raises(DimensionMismatch):
        prob.add_row({5: 1}, 0)
    with pytest.raises(DimensionMismatch):
        prob.set_objective({-1: 2})


def test_negative_rhs_rows_are_handled():
    # equality with negative right-hand side exercises the sign flip
    prob = LpProblem(2, "rational")
    prob.set_objective({0: 1, 1: 1})
    prob.add_row({0: -1, 1: -1}, rat(-1, 2))
    out = solve_exact(prob)
    assert out.status == "optimal"
    assert out.value == rat(1, 2)


def test_certified_matches_exact_value():
    vs = enumerate_ns2()
    rng = np.random.default_rng(3)
    coeffs = {j: rat(int(k), 8)
              for j, k in enumerate(rng.integers(-4, 5, len(vs)))}
    prob = hull_problem(vs.points, [rat(1, 8)] * 64)
    prob.set_objective(coeffs)
    cert = solve_certified(prob)
    assert cert.status == "optimal"
    assert cert.mode == "rational"
    assert cert.stats["method"] in ("certified-crossover", "exact-simplex")
    assert verify_primal(prob, cert.x) and verify_dual(prob, cert.y)
    prob2 = hull_problem(vs.points, [rat(1, 8)] * 64)
    prob2.set_objective(coeffs)
    assert cert.value == solve_exact(prob2).value


def test_certified_falls_back_on_infeasible():
    locals_ = enumerate_local().points
    box = pr_box_variants()[0]
    target = pr_product_point("AB|C", box, (0, 0)).flat()
    prob = hull_problem(locals_, target)
    out = solve_certified(prob)
    assert out.status == "infeasible"
    assert verify_farkas(prob, out.farkas)


def test_bad_mode_rejected():
    with pytest.raises(ValueError):
        LpProblem(1, "decimal")
