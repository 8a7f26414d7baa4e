"""Acceptance suite: every criterion at its stated tolerance, one line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
PASS lines; each test fails loudly if its criterion is not met.
"""

import json
import time
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

from tribvp import (
    SolutionCurve,
    SolveConfig,
    ThresholdTriple,
    certify,
    check_gamma_bound,
    check_nonnegativity,
    compute_constants,
    cone_membership,
    lambda_constant,
    solve_linear,
    solve_linear_oracle,
)
from tribvp.config import parse_run_config
from tribvp.functions import RationalSigmoid, SeparableExpPiecewise
from tribvp.nonlinear import apply_operator_A, find_solutions, picard_solutions, shooting_solutions
from tribvp.constants import gamma
from tribvp.runner import run

from conftest import (
    EXP_PIECES,
    make_exp_piecewise_problem,
    make_sigmoid_problem,
    random_nonnegative_load,
    random_valid_problem,
)

N = 2049
CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture(scope="module")
def linear_suite():
    """200 random (problem, load, solution) triples at n = 2049."""
    rng = np.random.default_rng(987654321)
    suite = []
    for _ in range(200):
        p = random_valid_problem(rng)
        y = random_nonnegative_load(float(p.T), N, rng)
        suite.append((p, y, solve_linear(p, y)))
    return suite


@pytest.fixture(scope="module")
def sigmoid_search():
    """The heavy multi-start run, shared by the multiplicity criteria."""
    p = make_sigmoid_problem()
    tt = ThresholdTriple.from_abc(F(1, 120), F(2), F(124), F(1, 4))
    cfg = SolveConfig(thresholds=tt)
    start = time.perf_counter()
    picard = picard_solutions(p, cfg)
    shooting = shooting_solutions(p, cfg)
    combined = find_solutions(p, cfg)
    elapsed = time.perf_counter() - start
    return {
        "picard": picard,
        "shooting": shooting,
        "combined": combined,
        "elapsed": elapsed,
        "cfg": cfg,
    }


def test_criterion_01_constants_exact_fractions():
    k1 = compute_constants(make_sigmoid_problem())
    assert (k1.gamma, k1.m, k1.delta) == (F(1, 4), F(1, 3), F(4, 45))
    assert all(isinstance(v, F) for v in (k1.gamma, k1.m, k1.delta))
    k2 = compute_constants(make_exp_piecewise_problem())
    assert (k2.gamma, k2.m, k2.delta) == (F(1, 4), F(4, 25), F(1, 8))
    assert all(isinstance(v, F) for v in (k2.gamma, k2.m, k2.delta))
    print(
        "CRITERION 1 PASS: constants exact -- "
        f"sigmoid ({k1.gamma}, {k1.m}, {k1.delta}), exp-piecewise ({k2.gamma}, {k2.m}, {k2.delta})"
    )


def test_criterion_02_lambda_exact_fractions():
    # independently derived by substituting the parameters into the
    # structural-constant formula with exact rationals (see oracle below)
    def oracle(T, eta, alpha, beta):
        return (2 * T - alpha * eta**2) - beta * (alpha * eta**2 - 2 * eta + 2 * T)

    p1, p2 = make_sigmoid_problem(), make_exp_piecewise_problem()
    assert oracle(F(1), F(1, 3), F(3), F(1, 2)) == F(5, 6)
    assert oracle(F(1), F(1, 2), F(1), F(1)) == F(1, 2)
    assert lambda_constant(p1) == F(5, 6)
    assert lambda_constant(p2) == F(1, 2)
    print("CRITERION 2 PASS: structural constant exact -- 5/6 and 1/2")


def test_criterion_03_certification_regression():
    start = time.perf_counter()
    p1 = make_sigmoid_problem()
    cert1 = certify(p1, ThresholdTriple.from_abc(F(1, 120), F(2), F(124), F(1, 4)), compute_constants(p1))
    p2 = make_exp_piecewise_problem()
    cert2 = certify(p2, ThresholdTriple.from_abc(F(1, 4), F(4), F(544), F(1, 4)), compute_constants(p2))
    elapsed = time.perf_counter() - start
    assert cert1.verdict and cert2.verdict
    assert abs(cert1.d1.bound - 1.0 / 360.0) <= 1e-9
    assert abs(cert1.d2.bound - 22.5) <= 1e-9
    assert abs(cert1.d3.bound - 124.0 / 3.0) <= 1e-9
    assert abs(cert2.d2.bound - 32.0) <= 1e-9
    assert abs(cert2.d3.bound - 87.04) <= 1e-9
    assert elapsed < 5.0
    print(
        "CRITERION 3 PASS: both problems certify true "
        f"(bounds 1/360, 22.5, 124/3; 32, 87.04) in {elapsed:.2f}s"
    )


def test_criterion_04_solver_vs_oracle_and_convergence(linear_suite):
    start = time.perf_counter()
    worst = 0.0
    for p, y, u in linear_suite:
        u_oracle = solve_linear_oracle(p, y)
        worst = max(worst, float(np.max(np.abs(u.values - u_oracle.values))))
    assert worst <= 1e-8

    # order check against the constant-load closed form (quadratic): the
    # quadrature is exact there, so accept a roundoff-floor error as
    # "order 2 or better"; otherwise require the ratio
    p = make_sigmoid_problem()
    errors = {}
    for n in (1025, 2049):
        u = solve_linear(p, SolutionCurve.constant(1.0, 1.0, n))
        t = u.nodes
        exact = -(t**2) / 2 + (26.0 / 45.0) * t + 37.0 / 270.0
        errors[n] = float(np.max(np.abs(u.values - exact)))
    floor = 1e-13
    ratio = errors[1025] / max(errors[2049], 1e-300)
    assert errors[2049] <= floor or ratio >= 3.5
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    print(
        f"CRITERION 4 PASS: 200-sample oracle agreement {worst:.2e} <= 1e-8; "
        f"closed-form error {errors[2049]:.1e} at roundoff floor (exact quadrature) in {elapsed:.1f}s"
    )


def test_criterion_05_cone_property_suite(linear_suite):
    for p, _, u in linear_suite:
        assert check_nonnegativity(u).ok
        assert check_gamma_bound(u, float(gamma(p)), float(p.eta)).ok
    rng = np.random.default_rng(1357)
    for p in (make_sigmoid_problem(), make_exp_piecewise_problem()):
        for _ in range(100):
            u = solve_linear(p, random_nonnegative_load(1.0, 1025, rng))
            au = apply_operator_A(p, u)
            assert cone_membership(au).ok
    print(
        "CRITERION 5 PASS: nonnegativity + tail-minimum bound on 200 random "
        "solutions; operator maps 100 random cone elements into the cone on both problems"
    )


def test_criterion_06_multiplicity_exhibit(sigmoid_search):
    found = sigmoid_search["combined"]
    assert len(found) >= 3, f"expected at least 3 distinct solutions, found {len(found)}"
    curves = [r.curve for r, _ in found]
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            sep = float(np.max(np.abs(curves[i].values - curves[j].values)))
            assert sep > 1e-3, f"solutions {i} and {j} separated by only {sep}"
    for result, _ in found:
        h = result.curve.h
        assert result.residuals.ode_residual_max <= 100.0 * h * h
        assert result.residuals.bc0_residual <= 1e-8
        assert result.residuals.bcT_residual <= 1e-8
    labels = {cls.label for _, cls in found}
    assert {"small", "large-min", "middle"} <= labels, f"labels found: {labels}"
    assert sigmoid_search["elapsed"] < 120.0
    norms = sorted(round(cls.norm, 6) for _, cls in found)
    print(
        f"CRITERION 6 PASS: {len(found)} verified solutions with norms {norms}, "
        f"labels {sorted(labels)}, in {sigmoid_search['elapsed']:.1f}s"
    )


def test_criterion_07_route_cross_validation(sigmoid_search):
    picard = sigmoid_search["picard"]
    shooting = sigmoid_search["shooting"]
    assert picard and shooting
    # every attracting fixed point reached by iteration must be matched by a
    # shooting solution; matched pairs agree well inside 1e-6.  The middle
    # solution is a repelling fixed point, so only shooting can reach it.
    matched_pairs = 0
    for pr in picard:
        dists = [float(np.max(np.abs(pr.curve.values - sr.curve.values))) for sr in shooting]
        best = min(dists)
        assert best <= 1e-6, f"iteration solution with norm {pr.curve.sup_norm()} unmatched ({best})"
        matched_pairs += 1
    assert matched_pairs >= 2  # the zero and the large solution at minimum
    print(
        f"CRITERION 7 PASS: all {matched_pairs} iteration-route solutions matched "
        "by shooting within 1e-6 after dedup"
    )


def test_criterion_08_function_catalog():
    f1 = RationalSigmoid(scale=F(40))
    assert f1(0, F(2)) == F(32)
    assert f1(0, F(1, 120)) == F(40, 14401)

    h = SeparableExpPiecewise(rate=F(1), pieces=EXP_PIECES)
    for bp in (F(1), F(4), F(544)):
        idx = [p.until for p in EXP_PIECES[:-1]].index(bp)
        left = EXP_PIECES[idx].evaluate(bp)
        right = EXP_PIECES[idx + 1].evaluate(bp)
        assert abs(float(left) - float(right)) <= 1e-9
    # the final breakpoint: both branches evaluate to exactly 23751/272,
    # so there is no discrepancy to report
    left = EXP_PIECES[3].evaluate(F(546))
    right = EXP_PIECES[4].evaluate(F(546))
    assert left == right == F(23751, 272)
    assert h.u_profile(F(546)) == F(23751, 272)
    print(
        "CRITERION 8 PASS: sigmoid values exact (32, 40/14401); piecewise "
        "continuous at 1, 4, 544; branch values at 546 exactly equal (23751/272)"
    )


def test_criterion_09_deterministic_reports(tmp_path):
    for name in ("sigmoid.json", "exp_piecewise.json"):
        doc = json.loads((CONFIG_DIR / name).read_text())
        out = tmp_path / name.removesuffix(".json")
        cfg = parse_run_config(doc, "certify", out, include_timing=False)
        reports = []
        for _ in range(2):
            run(cfg)
            reports.append((out / "report.json").read_bytes())
        assert reports[0] == reports[1], f"report for {name} not byte-identical"
    print("CRITERION 9 PASS: repeated runs produce byte-identical reports (timing excluded)")
