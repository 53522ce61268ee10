"""Exact enumeration of maximal non-stable, unstable and polystable torus states
for representations of classical groups."""

from .algorithms import StabilityReport, analyze, semistable_max_states, stable_max_states, superset_stream
from .core import (
    DomainError,
    Options,
    PreconditionError,
    Problem,
    State,
    assumption_check,
    essential_semistable,
    essential_stable,
    maximality_fastpath,
    polystable_strata,
    weyl_refine,
)
from .roots import RootSystemSpec, build
from .weights import evaluate, parse_rep_expr


def problem(family: str, rank: int, rep: str, fallback: bool = False) -> Problem:
    """Build a problem from a root system and a representation expression."""
    data = build(RootSystemSpec(family, rank))
    return Problem.from_weights(data, evaluate(parse_rep_expr(rep), data), fallback=fallback)


__all__ = [
    "DomainError",
    "Options",
    "PreconditionError",
    "Problem",
    "RootSystemSpec",
    "StabilityReport",
    "State",
    "analyze",
    "assumption_check",
    "build",
    "essential_semistable",
    "essential_stable",
    "evaluate",
    "maximality_fastpath",
    "parse_rep_expr",
    "polystable_strata",
    "problem",
    "semistable_max_states",
    "stable_max_states",
    "superset_stream",
    "weyl_refine",
]
