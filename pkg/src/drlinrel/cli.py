"""Command-line interface.

Exit codes: 0 ok, 2 malformed input or flags, 3 invalid operator,
4 dimension mismatch, 5 violated precondition (e.g. pair not in D).
"""
import argparse
import json
import sys

import numpy as np

from . import drcalc, iterate, lab, linrel
from .errors import (DimensionMismatch, DimensionTooSmall, MalformedMatrix,
                     NotFirmlyNonexpansive, NotInD, NotMaximallyMonotone,
                     NotSingleValued, PreconditionViolated, SingularMatrix)
from .numerics import matrix_from_dict, matrix_to_dict

EXIT_OK, EXIT_PARSE, EXIT_OPERATOR, EXIT_DIMENSION, EXIT_PRECONDITION = 0, 2, 3, 4, 5

_EXIT_FOR = [
    (MalformedMatrix, EXIT_PARSE),
    ((NotMaximallyMonotone, NotFirmlyNonexpansive, SingularMatrix, NotSingleValued),
     EXIT_OPERATOR),
    ((DimensionMismatch, DimensionTooSmall), EXIT_DIMENSION),
    ((NotInD, PreconditionViolated), EXIT_PRECONDITION),
]


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_PARSE) from None


def _dump(obj, fh=None):
    json.dump(obj, fh or sys.stdout, indent=2, allow_nan=False)
    (fh or sys.stdout).write("\n")


def load_relation(path):
    d = _read_json(path)
    if not isinstance(d, dict) or "graph_basis" not in d:
        raise CliError(f"{path}: expected relation JSON with 'n' and 'graph_basis'", EXIT_PARSE)
    return linrel.LinearRelation.from_dict(d)


def _parse_vector(text):
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise CliError(f"bad vector {text!r}; expected comma-separated reals", EXIT_PARSE) from None


def cmd_rel(args):
    if args.matrix:
        A = linrel.from_matrix(matrix_from_dict(_read_json(args.matrix)))
    elif args.normal_cone:
        A = linrel.normal_cone_of_subspace(matrix_from_dict(_read_json(args.normal_cone)))
    else:
        A = linrel.from_resolvent(matrix_from_dict(_read_json(args.resolvent)))
    monotone = linrel.is_monotone(A, args.tol)
    maximal = linrel.is_maximally_monotone(A, args.tol)
    if not maximal:
        raise NotMaximallyMonotone(
            f"relation is not maximally monotone (monotone={monotone}, graph dim {A.dim}, n {A.n})")
    J = linrel.resolvent_of(A, args.tol)
    _dump({"relation": A.to_dict(),
           "diagnostics": {"monotone": monotone, "maximally_monotone": maximal,
                           "symmetric": linrel.is_symmetric(A, args.tol),
                           "resolvent": matrix_to_dict(J)}})


def cmd_dr(args):
    A, B = load_relation(args.A), load_relation(args.B)
    _dump(drcalc.dr_operator(A, B, args.tol).to_dict())


def cmd_iterate(args):
    A, B = load_relation(args.A), load_relation(args.B)
    trace = iterate.run_dr(A, B, _parse_vector(args.x0), args.max_iter, args.tol)
    if trace.converged:
        Z = iterate.solution_set(A, B)
        summary = (f"# converged iterations={trace.iterations_used} "
                   f"shadow_limit={json.dumps(trace.shadow_limit.tolist())} "
                   f"dist_to_Z={Z.distance(trace.shadow_limit)!r}")
    else:
        summary = f"# NoConvergence iterations={trace.iterations_used} tol={args.tol!r}"
    text = trace.to_csv() + summary + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sweep(args):
    base = _read_json(args.config) if args.config else {}
    flags = {"n": args.n, "trials": args.trials, "seed": args.seed,
             "commute_tol": args.commute_tol, "lambda_escape": args.lambda_escape}
    base.update({k: v for k, v in flags.items() if v is not None})
    try:
        cfg = lab.SweepConfig.from_dict(base)
    except (TypeError, ValueError) as exc:
        raise CliError(f"bad sweep config: {exc}", EXIT_PARSE) from None
    records = lab.genericity_sweep(cfg)
    text = lab.records_to_csv(records)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"fraction_in_D={lab.fraction_in_D(records)!r} n={cfg.n} trials={cfg.trials} "
          f"seed={cfg.seed} commute_tol={cfg.commute_tol!r}",
          file=sys.stdout if args.out else sys.stderr)


def cmd_escape(args):
    A, B = load_relation(args.A), load_relation(args.B)
    A_lam, B_lam, report = lab.escape_from_D(A, B, args.lam, args.tol)
    _dump({"A_lambda": A_lam.to_dict(), "B_lambda": B_lam.to_dict(), **report.to_dict()})


def build_parser():
    p = argparse.ArgumentParser(
        prog="drlinrel",
        description="Douglas-Rachford operators of maximally monotone linear relations.")
    sub = p.add_subparsers(dest="command", required=True)

    rel = sub.add_parser("rel", help="build a relation and print its canonical JSON")
    src = rel.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help="Matrix JSON file M; graph {(x, Mx)}")
    src.add_argument("--normal-cone", help="Matrix JSON file whose columns span V")
    src.add_argument("--resolvent", help="Matrix JSON file holding a resolvent J")
    rel.add_argument("--tol", type=float, default=linrel.TOL)
    rel.set_defaults(func=cmd_rel)

    dr = sub.add_parser("dr", help="diagnose the DR operator of two relations")
    dr.add_argument("A")
    dr.add_argument("B")
    dr.add_argument("--tol", type=float, default=linrel.TOL)
    dr.set_defaults(func=cmd_dr)

    it = sub.add_parser("iterate", help="run the DR iteration and write a CSV trace")
    it.add_argument("A")
    it.add_argument("B")
    it.add_argument("--x0", required=True, help="starting point, e.g. 1,1")
    it.add_argument("--max-iter", type=int, default=iterate.MAX_ITER)
    it.add_argument("--tol", type=float, default=iterate.STEP_TOL)
    it.add_argument("--out")
    it.set_defaults(func=cmd_iterate)

    sw = sub.add_parser("sweep", help="genericity sweep over random symmetric pairs")
    sw.add_argument("--config", help="JSON file with SweepConfig fields; flags override")
    sw.add_argument("--n", type=int)
    sw.add_argument("--trials", type=int)
    sw.add_argument("--seed", type=int)
    sw.add_argument("--commute-tol", type=float)
    sw.add_argument("--lambda-escape", type=float)
    sw.add_argument("--out")
    sw.set_defaults(func=cmd_sweep)

    es = sub.add_parser("escape", help="perturb a pair in D out of D")
    es.add_argument("A")
    es.add_argument("B")
    es.add_argument("--lambda", dest="lam", type=float, default=lab.LAMBDA_ESCAPE)
    es.add_argument("--tol", type=float, default=lab.COMMUTE_TOL)
    es.set_defaults(func=cmd_escape)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "max_iter", 1) < 1 or getattr(args, "tol", 1.0) <= 0:
        print("drlinrel: error: --max-iter must be >= 1 and --tol > 0", file=sys.stderr)
        return EXIT_PARSE
    lam = getattr(args, "lam", None)
    if lam is not None and not 0.0 < lam < 1.0:
        print("drlinrel: error: --lambda must lie in (0, 1)", file=sys.stderr)
        return EXIT_PARSE
    try:
        args.func(args)
    except CliError as exc:
        print(f"drlinrel: error: {exc}", file=sys.stderr)
        return exc.code
    except Exception as exc:
        for types, code in _EXIT_FOR:
            if isinstance(exc, types):
                print(f"drlinrel: error: {exc}", file=sys.stderr)
                return code
        raise
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
