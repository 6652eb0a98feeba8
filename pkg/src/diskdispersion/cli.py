"""Command-line interface.

Verbs: solve, generate, constants, svg, oracle. Exit codes: 0 success,
2 validation failure, 3 solver failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import formats, generators, svgout
from .geometry import BallInstance, validate
from .hybrid import solve_hybrid
from .lp import IterationLimitError
from .oracle import BudgetExceededError, brute_force_opt, certify, grid_resolution_error
from .perturbation import solve_a1, solve_centers
from .projection_lp import solve_a2
from .ratios import certified_constants

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_IO = 4

ALGORITHMS = ("centers", "a1", "a2", "hybrid", "auto")


class _CLIError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_instance(path) -> BallInstance:
    try:
        return formats.load_instance(path)
    except formats.SchemaError as exc:
        raise _CLIError(EXIT_VALIDATION, f"invalid instance file {path}: {exc}")
    except (OSError, json.JSONDecodeError) as exc:
        raise _CLIError(EXIT_IO, f"cannot read instance file {path}: {exc}")


def _pick_auto(inst: BallInstance) -> str:
    if inst.is_unit():
        return "hybrid"
    if validate(inst, require_disjoint=True).ok and inst.n >= 2 and inst.dimension in (2, 3):
        return "a2"
    return "centers"


def _run_solve(args) -> int:
    inst = _load_instance(args.input)
    algorithm = args.algorithm
    if algorithm == "auto":
        algorithm = _pick_auto(inst)
    try:
        if algorithm == "centers":
            solution = solve_centers(inst)
        elif algorithm == "a1":
            solution = solve_a1(inst).solution
        elif algorithm == "a2":
            solution = solve_a2(inst, epsilon=args.epsilon).solution
        else:
            solution = solve_hybrid(inst, epsilon=args.epsilon).solution
    except ValueError as exc:
        raise _CLIError(EXIT_VALIDATION, f"{algorithm}: {exc}")
    except (IterationLimitError, RuntimeError, ArithmeticError) as exc:
        raise _CLIError(EXIT_SOLVER, f"{algorithm}: {exc}")

    cert = certify(solution, inst)
    try:
        formats.save_solution(solution, cert, args.output)
    except OSError as exc:
        raise _CLIError(EXIT_IO, f"cannot write {args.output}: {exc}")
    if args.svg:
        try:
            svgout.save_svg(inst, solution.points, solution.algorithm, args.svg)
        except ValueError as exc:
            raise _CLIError(EXIT_VALIDATION, str(exc))
        except OSError as exc:
            raise _CLIError(EXIT_IO, f"cannot write {args.svg}: {exc}")
    print(
        f"{solution.algorithm}: min_distance = {solution.min_distance:.9g}, "
        f"ratio >= {cert.ratio_lower_bound:.4f} (opt <= {cert.opt_upper:.9g})"
    )
    return EXIT_OK


def _run_generate(args) -> int:
    try:
        inst = generators.generate_instance(
            args.kind, args.n, args.seed, min_gap=args.min_gap, dimension=args.dimension
        )
    except ValueError as exc:
        raise _CLIError(EXIT_VALIDATION, str(exc))
    except generators.GenerationError as exc:
        raise _CLIError(EXIT_SOLVER, str(exc))
    try:
        formats.save_instance(inst, args.output)
    except OSError as exc:
        raise _CLIError(EXIT_IO, f"cannot write {args.output}: {exc}")
    print(f"wrote {args.kind} instance with n = {inst.n}, d = {inst.dimension} to {args.output}")
    return EXIT_OK


def _run_constants(args) -> int:
    rows = certified_constants()
    width = max(len(r.name) for r in rows)
    for r in rows:
        note = f"  ({r.note})" if r.note else ""
        print(f"{r.name:<{width}} = {r.value:.10f}   residual = {r.residual:.3e}{note}")
    return EXIT_OK


def _run_svg(args) -> int:
    inst = _load_instance(args.instance)
    try:
        record = formats.load_solution(args.solution)
    except formats.SchemaError as exc:
        raise _CLIError(EXIT_VALIDATION, f"invalid solution file {args.solution}: {exc}")
    except (OSError, json.JSONDecodeError) as exc:
        raise _CLIError(EXIT_IO, f"cannot read solution file {args.solution}: {exc}")
    if record.points.shape[0] != inst.n:
        raise _CLIError(EXIT_VALIDATION, "solution and instance disagree on the number of balls")
    try:
        svgout.save_svg(inst, record.points, record.algorithm, args.output)
    except ValueError as exc:
        raise _CLIError(EXIT_VALIDATION, str(exc))
    except OSError as exc:
        raise _CLIError(EXIT_IO, f"cannot write {args.output}: {exc}")
    print(f"wrote {args.output}")
    return EXIT_OK


def _run_oracle(args) -> int:
    inst = _load_instance(args.input)
    try:
        value = brute_force_opt(inst, args.k)
        err = grid_resolution_error(inst, args.k)
    except (BudgetExceededError, ValueError) as exc:
        raise _CLIError(EXIT_VALIDATION, str(exc))
    print(f"best_found = {value:.12g}  grid_error = {err:.6g}  k = {args.k}")
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(formats.dumps({"best_found": value, "grid_error": err, "k": args.k}))
                fh.write("\n")
        except OSError as exc:
            raise _CLIError(EXIT_IO, f"cannot write {args.output}: {exc}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diskdispersion",
        description="Pick one point per ball so the minimum pairwise distance is maximized.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file and write a solution file")
    p.add_argument("--input", required=True)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--output", required=True)
    p.add_argument("--svg", default=None, help="also render the solution to this SVG file")
    p.set_defaults(func=_run_solve)

    p = sub.add_parser("generate", help="write a seeded random instance file")
    p.add_argument("--kind", choices=generators.KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--min-gap", type=float, default=0.1, dest="min_gap")
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_run_generate)

    p = sub.add_parser("constants", help="print the certified constants with residuals")
    p.set_defaults(func=_run_constants)

    p = sub.add_parser("svg", help="render an instance + solution to SVG")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_run_svg)

    p = sub.add_parser("oracle", help="grid brute force: a lower bound on the optimum")
    p.add_argument("--input", required=True)
    p.add_argument("-k", type=int, default=21, help="grid points per axis")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_run_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
