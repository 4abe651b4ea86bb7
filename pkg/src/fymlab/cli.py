"""Command-line entry point ``fymlab``.

Exit codes: 0 pass / satisfied, 1 fail / not satisfied, 2 criterion
inapplicable (infinite degree), 64 malformed configuration.  Reports are
JSON on stdout with sorted keys; the same arguments and seed give
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from fymlab.criteria import (born_infeld_negative_bound, check_convex_hypersurface, check_sphere,
                             exponential_bound)
from fymlab.f_family import DomainError, degree_analytic, degree_numeric, make_builtin
from fymlab.hypersurface import InfiniteDegreeError
from fymlab.lie_algebra import AlgebraError, get_algebra

EXIT_OK, EXIT_FAIL, EXIT_INAPPLICABLE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return _jsonable(x.item())
    return x


def _emit(report: dict, args) -> None:
    text = json.dumps(_jsonable(report), sort_keys=True, indent=2)
    print(text)
    if getattr(args, "report", None):
        with open(args.report, "w") as fh:
            fh.write(text + "\n")


def _family(args):
    try:
        return make_builtin(args.family, p=args.p, eps=args.eps)
    except ValueError as err:
        raise UsageError(str(err)) from None


def _algebra(args):
    try:
        return get_algebra(args.algebra)
    except (AlgebraError, OSError, ValueError) as err:
        raise UsageError(str(err)) from None


def _mesh(args):
    from fymlab.discrete.mesh import parse_mesh_spec

    try:
        return parse_mesh_spec(args.mesh)
    except (ValueError, OSError) as err:
        raise UsageError(str(err)) from None


def _family_config(f):
    return {"family": f.name, "params": dict(f.params)}


def _write_face_csv(path, mesh, conn):
    from fymlab.discrete.gauge import curvature, density

    Rd = density(curvature(conn, mesh), mesh)
    norms = np.sqrt(conn.alg.inner(Rd, Rd))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["face", "norm_R"])
        for k, v in enumerate(norms):
            w.writerow([k, repr(float(v))])


# ---- subcommands -------------------------------------------------------------

def cmd_criterion(args) -> int:
    f = _family(args)
    if (args.sphere_n is None) == (args.lambdas is None):
        raise UsageError("give exactly one of --sphere-n or --lambdas")
    lambdas = None
    if args.lambdas is not None:
        try:
            lambdas = [float(x) for x in args.lambdas.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"cannot parse --lambdas {args.lambdas!r}") from None
    d = degree_analytic(f)
    report = {"config": _family_config(f), "degree": d}
    if args.sphere_n is not None:
        report["sphere_n"] = args.sphere_n
    else:
        report["lambdas"] = lambdas
    try:
        rep = check_sphere(args.sphere_n, d) if lambdas is None else check_convex_hypersurface(lambdas, d)
    except InfiniteDegreeError:
        report["applicable"] = False
        bound = None
        if args.sphere_n is not None and args.sphere_n > 4:
            if f.name == "born_infeld(eps=-1)":
                bound = {"kind": "born_infeld_negative", "norm_R_below": born_infeld_negative_bound(args.sphere_n)}
            elif f.name == "exponential":
                bound = {"kind": "exponential", "norm_R_below": exponential_bound(args.sphere_n)}
        report["bound"] = bound
        _emit(report, args)
        return EXIT_INAPPLICABLE
    except ValueError as err:
        raise UsageError(str(err)) from None
    report["applicable"] = True
    report.update(rep.as_dict())
    _emit(report, args)
    return EXIT_OK if rep.satisfied else EXIT_FAIL


def cmd_degree(args) -> int:
    f = _family(args)
    _emit({"config": _family_config(f), "analytic": degree_analytic(f), "numeric": degree_numeric(f)}, args)
    return EXIT_OK


def cmd_identities(args) -> int:
    from fymlab.identities import run_battery

    if args.trials < 1:
        raise UsageError("--trials must be positive")
    tol = 1e-9 if args.tol is None else args.tol
    res = run_battery(seed=args.seed, trials=args.trials, tol=tol, corrupt=args.corrupt)
    report = res.as_dict()
    report.update({"seed": args.seed, "corrupt": args.corrupt})
    _emit(report, args)
    return EXIT_OK if res.passed else EXIT_FAIL


def _random_connection(mesh, alg, f, rng, scale):
    from fymlab.discrete.gauge import random_connection

    try:
        return random_connection(mesh, alg, rng, scale, f)
    except ValueError as err:
        raise UsageError(str(err)) from None


def cmd_flow(args) -> int:
    from fymlab.discrete.flow import gradient_flow

    f, alg, mesh = _family(args), _algebra(args), _mesh(args)
    tol = 1e-8 if args.tol is None else args.tol
    conn = _random_connection(mesh, alg, f, np.random.default_rng(args.seed), args.scale)
    jsonl = open(args.jsonl, "w") if args.jsonl else None
    try:
        res = gradient_flow(conn, mesh, f, max_iters=args.max_iters, tol=tol, step_rule=args.step_rule,
                            jsonl=jsonl)
    finally:
        if jsonl:
            jsonl.close()
    if args.csv:
        _write_face_csv(args.csv, mesh, res.conn)
    report = res.report()
    report.update({"config": _family_config(f), "mesh": mesh.describe(), "algebra": alg.name,
                   "seed": args.seed, "tol": tol, "step_rule": args.step_rule})
    _emit(report, args)
    return EXIT_OK if res.converged else EXIT_FAIL


def cmd_index_sum(args) -> int:
    from fymlab.discrete.gauge import make_monopole
    from fymlab.discrete.simons import index_sum_check

    f, alg, mesh = _family(args), _algebra(args), _mesh(args)
    if mesh.kind != "icosphere":
        raise UsageError("index-sum needs an icosphere mesh")
    tol = 0.05 if args.tol is None else args.tol
    conn = make_monopole(args.charge, mesh, alg)
    try:
        rep = index_sum_check(conn, mesh, f)
    except DomainError as err:
        _emit({"error": str(err)}, args)
        return EXIT_FAIL
    if args.csv:
        _write_face_csv(args.csv, mesh, conn)
    rep.pop("per_field")
    rep.update({"config": _family_config(f), "mesh": mesh.describe(), "algebra": alg.name,
                "charge": args.charge, "tol": tol, "passed": rep["rel_gap"] < tol})
    _emit(rep, args)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def cmd_variation_check(args) -> int:
    from fymlab.discrete.gauge import (curvature, first_variation_analytic, first_variation_fd, index_form,
                                       make_monopole, random_form, second_variation_fd)

    f, alg, mesh = _family(args), _algebra(args), _mesh(args)
    tol = 1e-5 if args.tol is None else args.tol
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.trials):
        conn = _random_connection(mesh, alg, f, rng, args.scale)
        alpha = random_form(mesh, alg, 1, rng, args.scale)
        a = first_variation_analytic(conn, mesh, f, alpha)
        b = first_variation_fd(conn, mesh, f, alpha, h=1e-4)
        worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1e-300))
    report = {"config": _family_config(f), "mesh": mesh.describe(), "algebra": alg.name, "seed": args.seed,
              "trials": args.trials, "first_variation": {"max_rel_error": worst, "tol": tol}}
    passed = worst <= tol
    if mesh.kind == "icosphere":
        tol2 = 1e-3
        conn = make_monopole(args.charge, mesh, alg)
        phi = curvature(conn, mesh)
        worst2 = 0.0
        for _ in range(args.trials):
            alpha = random_form(mesh, alg, 1, rng, 1.0)
            a = index_form(phi, conn, mesh, f, alpha)
            b = second_variation_fd(conn, mesh, f, alpha, h=1e-3)
            worst2 = max(worst2, abs(a - b) / max(abs(a), abs(b), 1e-300))
        report["second_variation"] = {"charge": args.charge, "max_rel_error": worst2, "tol": tol2}
        passed = passed and worst2 <= tol2
    report["passed"] = passed
    _emit(report, args)
    return EXIT_OK if passed else EXIT_FAIL


# ---- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fymlab", description="F-Yang-Mills numerical laboratory")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def family_args(p):
        p.add_argument("--family", default="identity",
                       choices=("identity", "p_power", "born_infeld", "exponential"))
        p.add_argument("--p", type=float, default=None, help="exponent for p_power")
        p.add_argument("--eps", type=int, default=None, help="sign for born_infeld (+1 or -1)")
        p.add_argument("--report", default=None, help="also write the JSON report to this path")

    def run_args(p, mesh_default):
        family_args(p)
        p.add_argument("--mesh", default=mesh_default,
                       help="icosphere:LEVEL[:R] | torus:N1xN2[:L1xL2] | off:PATH")
        p.add_argument("--algebra", default="u1", help="u1, su2 or a JSON algebra file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("criterion", help="convex-hypersurface / sphere instability criterion")
    family_args(p)
    p.add_argument("--sphere-n", type=int, default=None)
    p.add_argument("--lambdas", default=None, help="comma-separated principal curvatures")
    p.set_defaults(func=cmd_criterion)

    p = sub.add_parser("degree", help="degree sup t F''/F' of a profile")
    family_args(p)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("identities", help="randomised identity battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--corrupt", action="store_true", help="negative control with a perturbed su(2)")
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("flow", help="gradient flow from a random connection")
    run_args(p, "torus:8x8")
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--step-rule", default="bb", choices=("armijo", "bb"))
    p.add_argument("--scale", type=float, default=0.3)
    p.add_argument("--jsonl", default=None, help="per-iteration history file")
    p.add_argument("--csv", default=None, help="per-face curvature norm of the final state")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("index-sum", help="index sum over ambient test fields at a monopole")
    run_args(p, "icosphere:4")
    p.add_argument("--charge", type=int, default=1)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_index_sum)

    p = sub.add_parser("variation-check", help="analytic vs finite-difference variations")
    run_args(p, "torus:4x4")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--scale", type=float, default=0.3)
    p.add_argument("--charge", type=int, default=1)
    p.set_defaults(func=cmd_variation_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"fymlab {args.command}: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
