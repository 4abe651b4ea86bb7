"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances and runtime limits are fixed constants below.
"""

import json
import math
import time
from fractions import Fraction

import numpy as np

from fymlab.cli import main
from fymlab.criteria import (born_infeld_critical_norm2, born_infeld_negative_bound, born_infeld_sign,
                             exponential_bound, exponential_critical_norm2, exponential_factor)
from fymlab.discrete.flow import gradient_flow
from fymlab.discrete.gauge import (curvature, first_variation_analytic, first_variation_fd, index_form,
                                   make_monopole, random_connection, random_form, second_variation_fd)
from fymlab.discrete.mesh import build_icosphere, build_torus_grid
from fymlab.discrete.simons import index_sum_check
from fymlab.f_family import INFINITE, degree_analytic, degree_numeric, make_builtin
from fymlab.hypersurface import ImmersionData, scalar_invariants
from fymlab.identities import run_battery
from fymlab.lie_algebra import su2, u1
from fymlab.pointwise_forms import PointForm

DEGREE_TOL = 1e-6
IDENTITY_TOL = 1e-9
SPHERE_TOL = 1e-10
FIRST_VARIATION_TOL = 1e-5
HESSIAN_TOL = 1e-3
INDEX_GAP_TOL = 0.05
FLOW_TOL = 1e-8
FLOW_MAX_ITERS = 5000


def _cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_criterion_1_degree_table(record):
    start = time.perf_counter()
    worst = 0.0
    ok = True
    for p in (2, 2.5, 3, 4, 6):
        f = make_builtin("p_power", p=p)
        worst = max(worst, abs(degree_analytic(f) - (p - 2) / 2), abs(degree_numeric(f) - (p - 2) / 2))
    for family, kw, want in [("born_infeld", {"eps": 1}, 0.0), ("identity", {}, 0.0),
                             ("born_infeld", {"eps": -1}, INFINITE), ("exponential", {}, INFINITE)]:
        f = make_builtin(family, **kw)
        a, b = degree_analytic(f), degree_numeric(f)
        if math.isinf(want):
            ok &= math.isinf(a) and math.isinf(b)
        else:
            worst = max(worst, abs(a - want), abs(b - want))
    elapsed = time.perf_counter() - start
    passed = ok and worst < DEGREE_TOL and elapsed < 1.0
    record(1, "degree table", passed, f"(max error {worst:.1e}, {elapsed:.2f} s)")
    assert passed


def test_criterion_2_simons_boundary(capsys, record):
    start = time.perf_counter()
    ok = _cli(capsys, "criterion", "--sphere-n", "5", "--family", "identity")[0] == 0
    ok &= _cli(capsys, "criterion", "--sphere-n", "4", "--family", "identity")[0] == 1
    mismatches = []
    for p in (2, 3, 4):
        for n in range(4, 13):
            code, out = _cli(capsys, "criterion", "--sphere-n", str(n), "--family", "p_power", "--p", str(p))
            if (code == 0) != (n > 2 * p) or json.loads(out)["satisfied"] != (n > 2 * p):
                mismatches.append((p, n))
    elapsed = time.perf_counter() - start
    passed = ok and not mismatches and elapsed < 1.0
    record(2, "sphere boundary n=4/n=5 and n > 2p rule", passed, f"(mismatches {mismatches}, {elapsed:.2f} s)")
    assert passed


def test_criterion_3_identity_battery(record):
    start = time.perf_counter()
    res = run_battery(seed=0, trials=200, ns=(2, 3, 4, 5, 6), tol=IDENTITY_TOL)
    elapsed = time.perf_counter() - start
    worst = max(res.max_residual.values())
    passed = res.passed and elapsed < 30.0
    record(3, "pointwise identity battery", passed, f"(max residual {worst:.1e}, {elapsed:.1f} s)")
    assert passed


def test_criterion_4_sphere_specialisations(record):
    rng = np.random.default_rng(4)
    worst = 0.0
    for n in range(2, 9):
        for r in (0.5, 1.0, 2.0):
            for alg in (u1(), su2()):
                for _ in range(5):
                    phi = PointForm.random(2, n, alg, rng)
                    inv = scalar_invariants(ImmersionData.sphere(n, r), phi)
                    q = inv.norm2
                    for got, want in ((inv.H_phi, 2 * n / r ** 2 * q), (inv.h1_sq, 4 / r ** 2 * q ** 2),
                                      (inv.h2, 2 / r ** 2 * q), (inv.h2p, 2 / r ** 2 * q)):
                        worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    passed = worst < SPHERE_TOL
    record(4, "sphere closed forms for H, h1, h2, h2'", passed, f"(max residual {worst:.1e})")
    assert passed


def test_criterion_5_infinite_degree_bounds(record):
    start = time.perf_counter()
    worst, exact = 0.0, True
    for n in range(5, 13):
        worst = max(worst, abs(born_infeld_negative_bound(n) - math.sqrt((n - 4) / (n - 2))),
                    abs(exponential_bound(n) - math.sqrt((n - 4) / 2)))
        t_bi, t_exp = born_infeld_critical_norm2(n), exponential_critical_norm2(n)
        exact &= t_bi == Fraction(n - 4, n - 2) and born_infeld_sign(t_bi, n) == 0
        exact &= t_exp == Fraction(n - 4, 2) and exponential_factor(t_exp, n) == 0
    elapsed = time.perf_counter() - start
    passed = exact and worst <= 4e-16 and elapsed < 1.0
    record(5, "infinite-degree bounds and exact sign roots", passed, f"(max error {worst:.1e}, {elapsed:.3f} s)")
    assert passed


def test_criterion_6_variational_oracles(record):
    start = time.perf_counter()
    rng = np.random.default_rng(6)
    worst1 = 0.0
    torus, sphere = build_torus_grid(4, 4), build_icosphere(1.0, 3)
    cases = [(torus, su2(), make_builtin("identity"))]
    cases += [(sphere, u1(), make_builtin(*a)) for a in (("identity",), ("p_power", 4), ("exponential",))]
    for mesh, alg, f in cases:
        for _ in range(20):
            conn = random_connection(mesh, alg, rng, 0.3, f)
            alpha = random_form(mesh, alg, 1, rng, 0.3)
            a = first_variation_analytic(conn, mesh, f, alpha)
            b = first_variation_fd(conn, mesh, f, alpha, h=1e-4)
            worst1 = max(worst1, abs(a - b) / abs(a))
    worst2 = 0.0
    conn = make_monopole(1, sphere)
    phi = curvature(conn, sphere)
    for f in (make_builtin("identity"), make_builtin("p_power", p=4), make_builtin("exponential")):
        for _ in range(5):
            alpha = random_form(sphere, u1(), 1, rng)
            I = index_form(phi, conn, sphere, f, alpha)
            H = second_variation_fd(conn, sphere, f, alpha, h=1e-3)
            worst2 = max(worst2, abs(I - H) / abs(H))
    elapsed = time.perf_counter() - start
    passed = worst1 <= FIRST_VARIATION_TOL and worst2 <= HESSIAN_TOL and elapsed < 120.0
    record(6, "first and second variation oracles", passed,
           f"(first {worst1:.1e}, hessian {worst2:.1e}, {elapsed:.1f} s)")
    assert passed


def test_criterion_7_index_sum(record):
    start = time.perf_counter()
    f = make_builtin("identity")
    gaps = {}
    for level in (2, 4):
        mesh = build_icosphere(1.0, level)
        gaps[level] = index_sum_check(make_monopole(1, mesh), mesh, f)["rel_gap"]
    elapsed = time.perf_counter() - start
    passed = gaps[4] < INDEX_GAP_TOL and gaps[4] < gaps[2] and elapsed < 300.0
    record(7, "index sum on icosphere, charge 1, identity", passed,
           f"(gap level 2 {gaps[2]:.2e}, level 4 {gaps[4]:.2e}, {elapsed:.1f} s)")
    assert passed


def test_criterion_8_flow(record):
    start = time.perf_counter()
    mesh = build_torus_grid(8, 8)
    conn = random_connection(mesh, u1(), np.random.default_rng(8), 0.3)
    res = gradient_flow(conn, mesh, make_builtin("identity"), max_iters=FLOW_MAX_ITERS, tol=FLOW_TOL)
    rep = res.report()
    elapsed = time.perf_counter() - start
    passed = res.converged and rep["grad_norm"] < FLOW_TOL and rep["monotone"] and elapsed < 60.0
    record(8, "u(1) flow on torus 8x8", passed,
           f"(grad {rep['grad_norm']:.1e} after {rep['iterations']} iterations, {elapsed:.2f} s)")
    assert passed


def test_criterion_9_reproducibility(capsys, record, tmp_path):
    runs = [
        ["criterion", "--sphere-n", "6", "--family", "exponential"],
        ["identities", "--trials", "20", "--seed", "9"],
        ["variation-check", "--mesh", "torus:4x4", "--algebra", "su2", "--family", "identity", "--seed", "1"],
        ["flow", "--mesh", "torus:8x8", "--algebra", "u1", "--family", "p_power", "--p", "4", "--seed", "7"],
        ["index-sum", "--mesh", "icosphere:4", "--charge", "1", "--family", "identity"],
    ]
    identical = []
    for argv in runs:
        outs = []
        for k in range(2):
            path = tmp_path / f"{argv[0]}_{k}.json"
            main(argv + ["--report", str(path)])
            capsys.readouterr()
            outs.append(path.read_bytes())
        identical.append(outs[0] == outs[1])
    passed = all(identical)
    record(9, "byte-identical reports for repeated seeded runs", passed, f"({sum(identical)}/{len(runs)} identical)")
    assert passed
