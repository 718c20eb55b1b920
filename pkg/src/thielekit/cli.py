"""Command-line surface: solve, kernelize, analyze, gen.

Exit status: 0 when a committee is found (or a reduction/analysis/generation
succeeds), 1 for a "no-instance" answer, 2 for any error. Reports go to
standard output as JSON; scores appear in the units of the input document.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Optional

from . import solvers
from .instance import Instance
from .instance_io import (
    InstanceFormatError,
    build_report,
    kernel_trace_to_dict,
    parse_instance,
    serialize_instance,
)
from .profile_graph import degree_stats
from .reductions import kernelize
from .scoring import as_rational
from .testkit import GeneratorSpec, gen_kdd_free

EXIT_COMMITTEE = 0
EXIT_NO_INSTANCE = 1
EXIT_ERROR = 2

SOLVER_NAMES = ("exact", "greedy", "fptas", "additive", "colorcoding", "pav")


def _fraction(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thielekit",
        description="Committee selection for approval elections under Thiele/OWA rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one solver on an instance file")
    solve.add_argument("--input", required=True, help="instance document (JSON)")
    solve.add_argument("--solver", required=True, choices=SOLVER_NAMES)
    solve.add_argument("--epsilon", type=_fraction, help="accuracy for fptas, e.g. 1/4")
    solve.add_argument("--t", type=_fraction, help="decision threshold (overrides the document)")
    solve.add_argument("--seed", type=int, default=0, help="randomness seed (colorcoding, pav)")
    solve.add_argument("--reps", type=int, help="repetition override for colorcoding")
    solve.add_argument("--override-W", type=_fraction, dest="override_w_cap", help="fptas: degree cap for the sunflower rule")
    solve.add_argument("--override-w", type=int, dest="override_w_size", help="fptas: sunflower size")
    solve.add_argument("--override-r", type=int, dest="override_r", help="fptas: candidate-retention bound")
    solve.add_argument("--budget", type=int, default=solvers.DEFAULT_SUBSET_BUDGET, help="subset-search budget")

    kern = sub.add_parser("kernelize", help="shrink an instance, preserving a (1-eps) fraction of the optimum")
    kern.add_argument("--input", required=True)
    kern.add_argument("--epsilon", type=_fraction, required=True)
    kern.add_argument("--output", required=True, help="where to write the reduced instance")

    analyze = sub.add_parser("analyze", help="print the structural parameters of an instance")
    analyze.add_argument("--input", required=True)

    gen = sub.add_parser("gen", help="generate a structurally controlled random instance")
    gen.add_argument("--candidates", type=int, required=True)
    gen.add_argument("--voters", type=int, required=True)
    gen.add_argument("--max-d", type=int, default=2, dest="max_d", help="forbid d voters sharing d candidates")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--duplicates", type=int, help="plant one duplicate-voter group of this multiplicity")
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--rule", choices=("pav", "cc", "av"), default="pav")
    gen.add_argument("--max-voter-degree", type=int, default=3, dest="max_voter_degree")
    gen.add_argument("--output", help="write here instead of standard output")
    return parser


def _load(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_instance(handle.read())


def _run_solver(args, instance: Instance):
    t_internal = instance.t
    if args.t is not None:
        t_internal = args.t / instance.scale
    instance = instance.with_threshold(t_internal)
    name = args.solver
    if name in ("fptas", "additive", "colorcoding", "pav") and instance.t is None:
        raise ValueError(f"solver {name!r} needs a threshold (--t or the document's t)")
    if name == "exact":
        return solvers.brute_force(instance, budget=args.budget), instance
    if name == "greedy":
        committee = solvers.greedy(instance)
        return solvers.SolveOutcome(committee, {"solver": "greedy"}), instance
    if name == "fptas":
        if args.epsilon is None:
            raise ValueError("fptas needs --epsilon")
        return (
            solvers.fptas(
                instance,
                args.epsilon,
                override_r=args.override_r,
                override_w_cap=args.override_w_cap,
                override_w_size=args.override_w_size,
                budget=args.budget,
            ),
            instance,
        )
    if name == "additive":
        return solvers.additive(instance, budget=args.budget), instance
    if name == "colorcoding":
        return solvers.color_coding(instance, seed=args.seed, reps=args.reps), instance
    if name == "pav":
        return solvers.pav_dispatch(instance, seed=args.seed, reps=args.reps), instance
    raise ValueError(f"unknown solver {name!r}")


def _cmd_solve(args) -> int:
    instance = _load(args.input)
    started = time.perf_counter()
    outcome, instance = _run_solver(args, instance)
    elapsed = time.perf_counter() - started
    parameters = {
        "input": args.input,
        "k": instance.k,
        "t": None if instance.t is None else str(instance.to_original_units(instance.t)),
        "epsilon": None if args.epsilon is None else str(args.epsilon),
        "seed": args.seed,
        "reps": args.reps,
        "override_W": None if args.override_w_cap is None else str(args.override_w_cap),
        "override_w": args.override_w_size,
        "override_r": args.override_r,
    }
    report = build_report(args.solver, instance, outcome, parameters, elapsed)
    sys.stdout.write(report.to_json())
    return EXIT_COMMITTEE if outcome.committee is not None else EXIT_NO_INSTANCE


def _cmd_kernelize(args) -> int:
    instance = _load(args.input)
    started = time.perf_counter()
    reduced, trace = kernelize(instance, args.epsilon)
    elapsed = time.perf_counter() - started
    with open(args.output, "w", encoding="utf-8") as handle:
        handle.write(serialize_instance(reduced))
    payload = {
        "solver": "kernelize",
        "parameters": {"input": args.input, "epsilon": str(args.epsilon), "output": args.output},
        "trace": kernel_trace_to_dict(trace),
        "wall_time_s": elapsed,
    }
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_COMMITTEE


def _cmd_analyze(args) -> int:
    instance = _load(args.input)
    stats = degree_stats(instance.graph)
    payload = {
        "candidates": len(instance.graph.candidates),
        "voters": len(instance.graph.voters),
        "d": stats.d,
        "d_determined": stats.determined,
        "delta_C": stats.delta_c,
        "delta_V": stats.delta_v,
        "lambda_min": str(instance.family.lambda_min) if instance.graph.voters else None,
        "lambda_max": str(instance.scale),
        "k": instance.k,
        "t": None if instance.t is None else str(instance.to_original_units(instance.t)),
    }
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_COMMITTEE


def _cmd_gen(args) -> int:
    spec = GeneratorSpec(
        candidates=args.candidates,
        voters=args.voters,
        d=args.max_d,
        max_voter_degree=args.max_voter_degree,
        duplicates=() if args.duplicates is None else (args.duplicates,),
        rule=args.rule,
        k=args.k,
        seed=args.seed,
    )
    instance = gen_kdd_free(spec)
    text = serialize_instance(instance)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_COMMITTEE


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "kernelize": _cmd_kernelize,
        "analyze": _cmd_analyze,
        "gen": _cmd_gen,
    }
    try:
        return handlers[args.command](args)
    except (InstanceFormatError, ValueError, solvers.BudgetExceededError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
