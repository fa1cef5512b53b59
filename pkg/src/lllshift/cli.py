"""Command-line front end.

Subcommands: ell0, build, demo, solve, verify, separate. Exit codes are
a stable contract: 0 success, 1 solver failure (budget exhausted,
unsatisfiable, violations found), 2 usage or malformed input, 3 internal
bound violation. Set LLL_SHIFT_LOG=debug|info|warning|error to control
diagnostics on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import serialize
from .certify import e_product_bounds
from .instances import verify_solution
from .shift import (
    BoundViolationError,
    build_instance,
    check_instance_bounds,
    compute_ell0,
    compute_n,
    threshold_product_bounds,
    verify_trapping,
)
from .separation import left_separated_subset, right_separated_subset
from .solving import (
    DEFAULT_MAX_RESAMPLES,
    KernelMismatchError,
    solve_backtracking,
    solve_moser_tardos,
)

EXIT_OK = 0
EXIT_SOLVER_FAILURE = 1
EXIT_USAGE = 2
EXIT_BOUND_VIOLATION = 3


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lllshift",
        description="Constraint-satisfaction toolkit: certified LLL checks, "
        "resampling and exhaustive solvers, and translated-pattern "
        "instances over finitely described groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ell0", help="block-count threshold and pool size n")
    p.add_argument("--k", type=_positive_int, required=True, help="alphabet size")
    p.add_argument("--dsize", type=_positive_int, required=True, help="pattern support size")
    p.set_defaults(func=cmd_ell0)

    p = sub.add_parser("build", help="build a shift instance from a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("demo", help="build, check bounds, solve, verify trapping")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--max-resamples", type=int, default=DEFAULT_MAX_RESAMPLES)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--solver", choices=("mt", "bt"), default="mt")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--max-resamples", type=int, default=DEFAULT_MAX_RESAMPLES)
    p.add_argument("--out", default="solution.json", help="solution file path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution file against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("separate", help="extract a separated subset")
    p.add_argument("--config", required=True, help='JSON with "group", "F", "D"')
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.set_defaults(func=cmd_separate)

    return parser


def cmd_ell0(args) -> int:
    ell0 = compute_ell0(args.k, args.dsize)
    n = compute_n(args.k, args.dsize)
    print(f"ell0={ell0} n={n}")
    if args.k == 1:
        print("note: degenerate alphabet (k=1): every event has probability 0 or 1")
        return EXIT_OK
    print("  ell  e*f(ell) enclosure        certified")
    for ell in range(max(1, ell0 - 3), ell0 + 3):
        lo, hi = threshold_product_bounds(args.k, args.dsize, ell)
        mark = "< 1" if hi < 1 else (">= 1" if lo >= 1 else "straddles 1")
        print(f"  {ell:>4} [{float(lo):.6f}, {float(hi):.6f}]  {mark}")
    return EXIT_OK


def _print_stats(built, report) -> None:
    inst = built.instance
    lo, hi = e_product_bounds(inst.p * (inst.d + 1))
    print(
        f"instance: events={len(inst.events)} vars={len(inst.universe)} "
        f"k={inst.universe.k}"
    )
    print(f"p={inst.p} d={inst.d}")
    print(f"e*p*(d+1) in [{float(lo):.6f}, {float(hi):.6f}] verdict={report.verdict}")
    print(
        f"ell0={built.ell0} n={built.n} |F|={len(built.config.f_set)} "
        f"|L|={len(built.translates)} degree_bound={report.degree_bound}"
    )
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)


def cmd_build(args) -> int:
    config = serialize.shift_config_from_json(serialize.read_json(args.config))
    built = build_instance(config)
    report = check_instance_bounds(built)
    _print_stats(built, report)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    serialize.write_json(out / "instance.json", serialize.built_shift_to_json(built))
    print(f"wrote {out / 'instance.json'}")
    return EXIT_OK


def cmd_demo(args) -> int:
    config = serialize.shift_config_from_json(serialize.read_json(args.config))
    built = build_instance(config)
    report = check_instance_bounds(built)
    _print_stats(built, report)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    serialize.write_json(out / "instance.json", serialize.built_shift_to_json(built))

    start = time.perf_counter()
    result = solve_moser_tardos(built.instance, args.seed, args.max_resamples)
    wall = time.perf_counter() - start
    if not result.success:
        print(
            f"solver: budget {args.max_resamples} exhausted after "
            f"{result.resamples} resamples",
            file=sys.stderr,
        )
        return EXIT_SOLVER_FAILURE
    print(f"solver: mt seed={args.seed} resamples={result.resamples} wall={wall:.3f}s")
    serialize.write_json(
        out / "solution.json",
        serialize.assignment_to_json(
            result.assignment, built.instance.universe, config.ctx
        ),
    )

    trap = verify_trapping(
        config.ctx,
        result.assignment,
        built.translates,
        config.pattern,
        config.core_window,
        instance=built.instance,
    )
    serialize.write_json(
        out / "trap_report.json", serialize.trap_report_to_json(config.ctx, trap)
    )
    print(f"trapping: {trap.trapped_count}/{trap.total} core positions trapped")
    return EXIT_OK if trap.all_trapped else EXIT_SOLVER_FAILURE


def cmd_solve(args) -> int:
    inst, ctx = serialize.instance_from_json(serialize.read_json(args.instance))
    start = time.perf_counter()
    if args.solver == "mt":
        result = solve_moser_tardos(inst, args.seed, args.max_resamples)
        wall = time.perf_counter() - start
        if not result.success:
            print(
                f"solver: budget {args.max_resamples} exhausted after "
                f"{result.resamples} resamples",
                file=sys.stderr,
            )
            return EXIT_SOLVER_FAILURE
        assignment = result.assignment
        print(f"solver: mt resamples={result.resamples} wall={wall:.3f}s")
    else:
        assignment = solve_backtracking(inst)
        wall = time.perf_counter() - start
        if assignment is None:
            print("solver: instance is unsatisfiable", file=sys.stderr)
            return EXIT_SOLVER_FAILURE
        print(f"solver: bt wall={wall:.3f}s")
    serialize.write_json(
        args.out, serialize.assignment_to_json(assignment, inst.universe, ctx)
    )
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    inst, ctx = serialize.instance_from_json(serialize.read_json(args.instance))
    f = serialize.assignment_from_json(
        serialize.read_json(args.solution), inst.universe, ctx
    )
    violated = verify_solution(inst, f)
    print(json.dumps({"violated": violated}))
    return EXIT_OK if not violated else EXIT_SOLVER_FAILURE


def cmd_separate(args) -> int:
    obj = serialize.read_json(args.config)
    ctx = serialize.group_from_json(obj["group"]) if "group" in obj else None
    if ctx is None:
        raise serialize.SerializationError("separate config: missing group")
    f_set = tuple(serialize.element_from_json(ctx, e) for e in obj.get("F", []))
    d_set = tuple(serialize.element_from_json(ctx, e) for e in obj.get("D", []))
    fn = left_separated_subset if args.side == "left" else right_separated_subset
    subset = fn(ctx, f_set, d_set)
    print(
        json.dumps(
            {
                "side": args.side,
                "pool_size": len(f_set),
                "size": len(subset),
                "bound_met": len(subset) * len(d_set) ** 2 >= len(f_set),
                "subset": [serialize.element_to_json(ctx, e) for e in subset],
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


_LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
    "quiet": logging.CRITICAL,
}


def main(argv=None) -> int:
    level = _LOG_LEVELS.get(os.environ.get("LLL_SHIFT_LOG", "warning").lower())
    logging.basicConfig(
        level=logging.WARNING if level is None else level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (BoundViolationError, KernelMismatchError) as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return EXIT_BOUND_VIOLATION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
