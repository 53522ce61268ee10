"""Subset enumeration over ranked combinations, with workers and checkpoints.

Combinations of ``k`` indices out of ``n`` are ranked in lexicographic order.
A scan covers a contiguous rank range; several ranges may run in separate
processes and are merged in rank order, so the outcome does not depend on how
the range was split.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Sequence

from .core import Antichain, Problem, maximality_fastpath, semistable_witness, stable_witnesses

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "gitstrata-checkpoint"
CHECKPOINT_VERSION = 1

STABLE = "stable"
SEMISTABLE = "semistable"


class CheckpointError(RuntimeError):
    """A checkpoint file is unreadable, of an unknown version, or for another problem."""


# -- ranked combinations ------------------------------------------------------


def combination_rank(c: Sequence[int], n: int) -> int:
    """Lexicographic rank of the sorted combination ``c`` of ``range(n)``."""
    k = len(c)
    r = 0
    prev = -1
    for i, x in enumerate(c):
        for y in range(prev + 1, x):
            r += comb(n - y - 1, k - i - 1)
        prev = x
    return r


def combination_unrank(r: int, n: int, k: int) -> list[int]:
    """Inverse of :func:`combination_rank`."""
    if not 0 <= r < comb(n, k):
        raise IndexError(f"rank {r} out of range for C({n},{k})")
    out = []
    x = 0
    for i in range(k):
        while True:
            c = comb(n - x - 1, k - i - 1)
            if r < c:
                break
            r -= c
            x += 1
        out.append(x)
        x += 1
    return out


def next_combination(c: list[int], n: int) -> bool:
    """Advance ``c`` in place to its lexicographic successor; False at the end."""
    k = len(c)
    i = k - 1
    while i >= 0 and c[i] == n - k + i:
        i -= 1
    if i < 0:
        return False
    c[i] += 1
    for j in range(i + 1, k):
        c[j] = c[j - 1] + 1
    return True


def split_range(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Split ``[lo, hi)`` into at most ``parts`` contiguous nonempty ranges."""
    total = hi - lo
    if total <= 0:
        return []
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    out = []
    start = lo
    for p in range(parts):
        end = start + step + (1 if p < extra else 0)
        out.append((start, end))
        start = end
    return out


# -- scanning -----------------------------------------------------------------


@dataclass
class ScanResult:
    entries: list = field(default_factory=list)  # (mask, rank, witness) local maxima
    records: list = field(default_factory=list)  # (rank, subset, witness, mask) for streams
    subsets: int = 0
    witnesses: int = 0


def _candidates(problem: Problem, mode: str, chosen):
    if mode == STABLE:
        return stable_witnesses(problem, chosen)
    lam = semistable_witness(problem, chosen)
    return [] if lam is None else [lam]


def scan_range(problem: Problem, mode: str, items, k: int, lo: int, hi: int, fastpath=False, stream=False) -> ScanResult:
    """Process combinations with ranks in ``[lo, hi)``."""
    res = ScanResult()
    if hi <= lo:
        return res
    n = len(items)
    local = Antichain()
    memo: dict = {}
    c = combination_unrank(lo, n, k)
    strict = mode == SEMISTABLE
    for rank in range(lo, hi):
        res.subsets += 1
        chosen = [items[i] for i in c]
        for lam in _candidates(problem, mode, chosen):
            res.witnesses += 1
            known = memo.get(lam)
            if known is None:
                mask = problem.gt_mask(lam) if strict else problem.ge_mask(lam)
                fast = bool(fastpath) and not strict and maximality_fastpath(problem, lam)
                known = memo[lam] = (mask, fast)
            mask, fast = known
            if stream:
                res.records.append((rank, tuple(c), lam, mask))
            else:
                local.insert(mask, rank, lam, known_maximal=fast)
        if rank + 1 < hi:
            next_combination(c, n)
    res.entries = [(m, r, w) for m, (r, w) in local.items()]
    return res


def _scan_job(args):
    return scan_range(*args)


# -- checkpoints --------------------------------------------------------------


def problem_hash(problem: Problem, mode: str, items, k: int) -> str:
    payload = {
        "family": problem.data.family,
        "rank": problem.data.rank,
        "fallback": problem.fallback,
        "characters": [list(c) for c in problem.chars],
        "mode": mode,
        "items": [list(c) for c in items],
        "k": k,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def write_checkpoint(path: str, digest: str, cursor: int, total: int, antichain: Antichain, problem: Problem, counters: dict) -> None:
    doc = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "problem_hash": digest,
        "cursor": cursor,
        "total": total,
        "counters": counters,
        "antichain": [
            {"indices": problem.indices_of(mask), "rank": rank, "witness": list(w)}
            for mask, (rank, w) in antichain.items()
        ],
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(doc, fh)
    os.replace(tmp, path)


def read_checkpoint(path: str, digest: str | None = None) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if doc.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"{path} is not a checkpoint file")
    if doc.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {doc.get('version')!r}")
    if digest is not None and doc.get("problem_hash") != digest:
        raise CheckpointError("checkpoint belongs to a different problem")
    return doc


def _restore(doc: dict) -> Antichain:
    ac = Antichain()
    for e in doc["antichain"]:
        mask = 0
        for i in e["indices"]:
            mask |= 1 << i
        ac.entries[mask] = (e["rank"], tuple(e["witness"]))
    return ac


# -- driver -------------------------------------------------------------------


@dataclass
class EnumerationStats:
    subsets: int = 0
    witnesses: int = 0
    total: int = 0
    resumed_from: int | None = None


def enumerate_maximal(
    problem: Problem,
    mode: str,
    items,
    k: int,
    workers: int = 1,
    fastpath: bool = False,
    checkpoint: str | None = None,
    checkpoint_every: int = 0,
    stop_after: int | None = None,
    sink: Callable[[dict], None] | None = None,
    on_chunk: Callable[[int], None] | None = None,
) -> tuple[Antichain, EnumerationStats]:
    """Scan every ``k``-subset of ``items`` and keep the maximal states.

    With ``sink`` set, every produced state is passed to it in rank order
    instead of being filtered (the returned antichain is then empty). With
    ``checkpoint`` set, progress is saved after each chunk and an existing
    file for the same problem is resumed. ``stop_after`` ends the scan early
    once that many subsets were processed in this call (to simulate an
    interruption).
    """
    n = len(items)
    total = comb(n, k) if 0 <= k <= n else 0
    stats = EnumerationStats(total=total)
    antichain = Antichain()
    start = 0
    digest = problem_hash(problem, mode, items, k)
    if checkpoint and os.path.exists(checkpoint):
        doc = read_checkpoint(checkpoint, digest)
        antichain = _restore(doc)
        start = doc["cursor"] + 1
        stats.resumed_from = start
        stats.subsets = doc["counters"].get("subsets", 0)
        stats.witnesses = doc["counters"].get("witnesses", 0)
        log.info("resuming %s enumeration at rank %d of %d", mode, start, total)
    workers = max(1, int(workers))
    if checkpoint_every and checkpoint_every > 0:
        chunk = checkpoint_every
    else:
        chunk = max(total - start, 1)
    if stop_after is not None:
        chunk = min(chunk, max(stop_after, 1))
    stream = sink is not None
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 and total - start > 1 else None
    processed = 0
    try:
        lo = start
        while lo < total:
            if stop_after is not None and processed >= stop_after:
                break
            hi = min(total, lo + chunk)
            ranges = split_range(lo, hi, workers)
            jobs = [(problem, mode, items, k, a, b, fastpath, stream) for a, b in ranges]
            if pool is None:
                results = [scan_range(*j) for j in jobs]
            else:
                results = list(pool.map(_scan_job, jobs))
            for res in results:
                stats.subsets += res.subsets
                stats.witnesses += res.witnesses
                if stream:
                    for rank, subset, lam, mask in res.records:
                        sink({"rank": rank, "subset": list(subset), "witness": list(lam), "mask": mask})
                else:
                    for mask, rank, lam in res.entries:
                        antichain.insert(mask, rank, lam)
            processed += hi - lo
            # the sink must hold every record before the cursor moves past it
            if on_chunk is not None:
                on_chunk(hi)
            if checkpoint:
                write_checkpoint(
                    checkpoint, digest, hi - 1, total, antichain, problem,
                    {"subsets": stats.subsets, "witnesses": stats.witnesses},
                )
            lo = hi
    finally:
        if pool is not None:
            pool.shutdown()
    return antichain, stats
