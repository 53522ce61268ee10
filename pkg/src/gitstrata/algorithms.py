"""Top-level drivers: maximal non-stable, maximal unstable and polystable states."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable

from .core import (
    DomainError,
    Options,
    PreconditionError,
    Problem,
    State,
    assumption_check,
    essential_semistable,
    essential_stable,
    polystable_strata,
    weyl_refine,
)
from .enumeration import SEMISTABLE, STABLE, enumerate_maximal

log = logging.getLogger(__name__)


@dataclass
class PhaseResult:
    states: list[State]
    essential: list
    dropped: int
    candidates: int
    subsets: int
    seconds: float


@dataclass
class StabilityReport:
    xi_size: int
    a3: int | None = None
    b2: int | None = None
    p_s: list[State] | None = None
    p_ss: list[State] | None = None
    p_ps: list[State] | None = None
    p_ps_dims: list[int] | None = None
    p_ps_before_dedup: int | None = None
    dropped_stable: int = 0
    dropped_semistable: int = 0
    times: dict = field(default_factory=dict)

    def counts(self) -> tuple:
        size = lambda s: None if s is None else len(s)
        return (self.xi_size, self.a3, self.b2, size(self.p_s), size(self.p_ss), size(self.p_ps))

    @property
    def dropped(self) -> int:
        return self.dropped_stable + self.dropped_semistable


def _run_phase(problem: Problem, mode: str, items, k: int, options: Options, checkpoint=None, sink=None, on_chunk=None) -> tuple:
    if k < 0:
        return [], 0
    ac, st = enumerate_maximal(
        problem,
        mode,
        items,
        k,
        workers=options.workers,
        fastpath=options.fastpath,
        checkpoint=checkpoint,
        checkpoint_every=options.checkpoint_every,
        sink=sink,
        on_chunk=on_chunk,
    )
    return [(mask, w) for mask, (_, w) in ac.items()], st.subsets


def _finish(problem: Problem, candidates, strict: bool, options: Options):
    kept, dropped = weyl_refine(problem, candidates, strict=strict, use_full_w=options.use_full_w)
    states = sorted(problem.state(m, w) for m, w in kept)
    return states, dropped


def _check_rank(problem: Problem):
    if problem.effective_rank < 1:
        raise DomainError("the state spans no direction; there are no one-parameter subgroups to test")


def _check_assumption(problem: Problem):
    if problem.fallback:
        return
    ok, reason = assumption_check(problem)
    if not ok:
        raise PreconditionError(reason)


def stable_max_states(problem: Problem, options: Options = Options(), checkpoint: str | None = None) -> PhaseResult:
    """Maximal non-stable states witnessed in the fundamental chamber."""
    _check_rank(problem)
    _check_assumption(problem)
    t0 = time.perf_counter()
    a3 = essential_stable(problem)
    candidates, subsets = _run_phase(problem, STABLE, a3, problem.effective_rank - 1, options, checkpoint)
    states, dropped = _finish(problem, candidates, False, options)
    if dropped:
        log.warning("Weyl refinement dropped %d non-stable candidates", dropped)
    return PhaseResult(states, a3, dropped, len(candidates), subsets, time.perf_counter() - t0)


def semistable_max_states(problem: Problem, options: Options = Options(), checkpoint: str | None = None) -> PhaseResult:
    """Maximal unstable states witnessed in the fundamental chamber."""
    _check_rank(problem)
    _check_assumption(problem)
    t0 = time.perf_counter()
    b2 = essential_semistable(problem)
    candidates, subsets = _run_phase(problem, SEMISTABLE, b2, problem.effective_rank, options, checkpoint)
    states, dropped = _finish(problem, candidates, True, options)
    if dropped:
        log.warning("Weyl refinement dropped %d unstable candidates", dropped)
    return PhaseResult(states, b2, dropped, len(candidates), subsets, time.perf_counter() - t0)


def superset_stream(problem: Problem, sink: Callable[[dict], None], options: Options = Options(),
                    checkpoint: str | None = None, dedupe: bool = False, on_chunk=None) -> int:
    """Send every chamber-witnessed non-negative state to ``sink``; return the count sent.

    Records carry the subset rank, the generating subset (indices into the
    essential characters), the witness and the state as a bitmask over the
    indexed characters. With ``dedupe`` a state already sent is skipped.
    """
    _check_rank(problem)
    _check_assumption(problem)
    a3 = essential_stable(problem)
    seen = set()
    count = 0

    def forward(rec):
        nonlocal count
        if dedupe:
            if rec["mask"] in seen:
                return
            seen.add(rec["mask"])
        count += 1
        sink(rec)

    _run_phase(problem, STABLE, a3, problem.effective_rank - 1, options, checkpoint, sink=forward, on_chunk=on_chunk)
    return count


def analyze(problem: Problem, tasks=("stable", "semistable", "polystable"), options: Options = Options()) -> StabilityReport:
    """Run the requested computations in dependency order."""
    tasks = set(tasks)
    if "polystable" in tasks:
        tasks.add("stable")
    report = StabilityReport(xi_size=len(problem))
    if "stable" in tasks:
        ph = stable_max_states(problem, options)
        report.a3 = len(ph.essential)
        report.p_s = ph.states
        report.dropped_stable = ph.dropped
        report.times["stable"] = ph.seconds
    if "semistable" in tasks:
        ph = semistable_max_states(problem, options)
        report.b2 = len(ph.essential)
        report.p_ss = ph.states
        report.dropped_semistable = ph.dropped
        report.times["semistable"] = ph.seconds
    if "polystable" in tasks:
        t0 = time.perf_counter()
        strata, before = polystable_strata(problem, report.p_s)
        report.p_ps = strata
        report.p_ps_dims = [_dim(s) for s in strata]
        report.p_ps_before_dedup = before
        report.times["polystable"] = time.perf_counter() - t0
    return report


def _dim(state: State) -> int:
    from .kernel import span_dim

    return span_dim(state.characters)
