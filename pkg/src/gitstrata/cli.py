"""Command line interface: ``gitstrata run|stats|render|verify|resume``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .core import DomainError, PreconditionError
from .enumeration import CheckpointError
from .io import (
    ProblemSpec,
    SchemaError,
    build_problem,
    emit_stats_table,
    load_result,
    load_spec,
    render_monomials,
    run,
)
from .kernel import DimensionError
from .oracle import MAX_ORACLE_CHARACTERS, SizeCapError
from .roots import RootSystemError
from .weights import RepDomainError, RepParseError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PRECONDITION = 2
EXIT_SIZE_CAP = 3

# exception class -> (machine-readable code, exit status)
_ERRORS = (
    (PreconditionError, "precondition", EXIT_PRECONDITION),
    (SizeCapError, "size-cap", EXIT_SIZE_CAP),
    (RepParseError, "parse", EXIT_ERROR),
    (SchemaError, "schema", EXIT_ERROR),
    (CheckpointError, "checkpoint", EXIT_ERROR),
    (RootSystemError, "domain", EXIT_ERROR),
    (RepDomainError, "domain", EXIT_ERROR),
    (DomainError, "domain", EXIT_ERROR),
    (DimensionError, "domain", EXIT_ERROR),
    (OSError, "io", EXIT_ERROR),
)


def _add_problem_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("spec", nargs="?", help="problem specification (JSON)")
    p.add_argument("--family", choices=["A", "B", "C", "D"])
    p.add_argument("--rank", type=int)
    p.add_argument("--rep", help='representation, e.g. "irrep(3,0,0)" or "wedge(2,irrep(2,0,0))"')
    p.add_argument("--tasks", help="comma separated: stable,semistable,polystable,superset-stream")
    p.add_argument("--description")
    p.add_argument("--full-w", dest="use_full_w", action="store_true", default=None,
                   help="refine with the whole Weyl group instead of ray stabilizers")
    p.add_argument("--fastpath", action="store_true", default=None,
                   help="skip containment checks for states certified maximal")
    p.add_argument("--fallback", action="store_true", default=None,
                   help="run without chamber pruning when the state assumption fails")
    p.add_argument("--workers", type=int)
    p.add_argument("--checkpoint", help="checkpoint path prefix")
    p.add_argument("--checkpoint-every", type=int, help="subsets per checkpoint")
    p.add_argument("-o", "--output", help="write the result document here")
    p.add_argument("--stream", help="newline-delimited output for the superset-stream task")
    p.add_argument("--stream-dedupe", action="store_true", default=None)
    p.add_argument("--max-characters", type=int)
    p.add_argument("--max-subsets", type=int)


def spec_from_args(args) -> ProblemSpec:
    base = load_spec(args.spec).to_dict() if args.spec else {}
    base.pop("schema", None)
    overrides = {
        "family": args.family,
        "rank": args.rank,
        "rep": args.rep,
        "tasks": args.tasks.split(",") if args.tasks else None,
        "description": args.description,
        "use_full_w": args.use_full_w,
        "fastpath": args.fastpath,
        "fallback": args.fallback,
        "workers": args.workers,
        "checkpoint": args.checkpoint,
        "checkpoint_every": args.checkpoint_every,
        "output": args.output,
        "stream": args.stream,
        "stream_dedupe": args.stream_dedupe,
        "max_characters": args.max_characters,
        "max_subsets": args.max_subsets,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    missing = [k for k in ("family", "rank", "rep") if k not in base]
    if missing:
        raise SchemaError(f"missing problem field(s): {', '.join(missing)}")
    return ProblemSpec.from_dict(base)


def _emit(doc, output) -> None:
    if not output:
        sys.stdout.write(doc.dumps())


def cmd_run(args) -> int:
    spec = spec_from_args(args)
    doc = run(spec)
    _emit(doc, spec.output)
    return EXIT_OK


def cmd_resume(args) -> int:
    spec = load_spec(f"{args.checkpoint}.spec.json")
    if args.workers:
        spec.workers = args.workers
    doc = run(spec)
    _emit(doc, spec.output)
    return EXIT_OK


def cmd_stats(args) -> int:
    docs = [load_result(p) for p in args.results]
    delimiter = {"aligned": None, "csv": ",", "tsv": "\t"}[args.format]
    sys.stdout.write(emit_stats_table(docs, delimiter))
    return EXIT_OK


def cmd_render(args) -> int:
    sys.stdout.write(render_monomials(load_result(args.result)))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .algorithms import semistable_max_states, stable_max_states
    from .oracle import brute_nonstable, brute_unstable, orbit_keys, random_consistency

    spec = spec_from_args(args)
    problem = build_problem(spec)
    if len(problem) > args.cap:
        raise SizeCapError(f"brute force refused: {len(problem)} characters exceed the cap of {args.cap}")
    data = problem.data
    options = spec.options()
    p_s = stable_max_states(problem, options).states
    p_ss = semistable_max_states(problem, options).states
    ok_s = orbit_keys(p_s, data) == brute_nonstable(problem.chars, data, args.cap)
    ok_ss = orbit_keys(p_ss, data) == brute_unstable(problem.chars, data, args.cap)
    bad = random_consistency(problem.chars, data, p_s, p_ss, trials=args.trials, seed=args.seed)
    report = {
        "nonstable_matches": ok_s,
        "unstable_matches": ok_ss,
        "random_trials": args.trials,
        "random_disagreements": len(bad),
    }
    print(json.dumps(report, sort_keys=True))
    return EXIT_OK if ok_s and ok_ss and not bad else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gitstrata", description="Maximal non-stable and unstable torus states of representations.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="compute the requested states and write a result document")
    _add_problem_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("stats", help="statistics table from result documents")
    p.add_argument("results", nargs="*")
    p.add_argument("--format", choices=["aligned", "csv", "tsv"], default="aligned")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("render", help="print states of a degree-d form problem as monomials")
    p.add_argument("result")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="compare against brute-force enumeration")
    _add_problem_flags(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=MAX_ORACLE_CHARACTERS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("resume", help="continue a checkpointed run")
    p.add_argument("checkpoint", help="checkpoint path prefix given to run")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_resume)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except tuple(e for e, _, _ in _ERRORS) as exc:
        for cls, code, status in _ERRORS:
            if isinstance(exc, cls):
                print(json.dumps({"error": code, "message": str(exc)}), file=sys.stderr)
                return status
        raise


if __name__ == "__main__":
    sys.exit(main())
