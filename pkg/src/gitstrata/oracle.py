"""Brute-force references for certifying the pruned algorithms on small inputs.

Nothing here uses essential characters, the chamber restriction, bitmasks or
antichain bookkeeping: every subset of the right size is tried, both signs of
each one-parameter subgroup are kept, and maximality is checked against the
whole collection at the end.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, Sequence

from .kernel import conv_contains_origin, nullspace_primitive, relint_contains_origin, span_dim
from .roots import RootSystemData, in_chamber

MAX_ORACLE_CHARACTERS = 40

UNSTABLE = "unstable"
STRICTLY_SEMISTABLE = "strictly-semistable"
STABLE = "stable"


class SizeCapError(RuntimeError):
    """The instance is too large for the requested computation."""


def _check_cap(xi, cap):
    if len(xi) > cap:
        raise SizeCapError(f"brute force refused: {len(xi)} characters exceed the cap of {cap}")


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _maximal(states: dict) -> dict:
    """Inclusion-maximal members of ``{frozenset: witnesses}``."""
    keys = list(states)
    return {s: states[s] for s in keys if not any(s < t for t in keys)}


def canonical_representative(chars: Iterable[Sequence], data: RootSystemData) -> tuple:
    """The orbit element with the lexicographically smallest sorted character list."""
    chars = [tuple(c) for c in chars]
    return min(tuple(sorted(w.apply(c) for c in chars)) for w in data.weyl_elements)


def _reduce(states: dict, data: RootSystemData) -> set:
    out = set()
    for s, witnesses in states.items():
        # every orbit of globally maximal states has a member witnessed in F
        assert any(in_chamber(data, w.apply(lam)) for lam in witnesses for w in data.weyl_elements)
        out.add(canonical_representative(s, data))
    return out


def brute_nonstable(xi: Sequence[Sequence[int]], data: RootSystemData, cap: int = MAX_ORACLE_CHARACTERS) -> set:
    """Weyl orbits of maximal non-stable states, as canonical representatives."""
    xi = sorted(set(tuple(c) for c in xi))
    _check_cap(xi, cap)
    nonzero = [c for c in xi if any(c)]
    d = data.rank
    states: dict = {}
    for sub in combinations(nonzero, d - 1):
        lam = nullspace_primitive(sub, data.cocharacter_constraints, ncols=data.ambient_dim)
        if lam is None:
            continue
        for sign in (1, -1):
            mu = tuple(sign * x for x in lam)
            s = frozenset(c for c in xi if _dot(mu, c) >= 0)
            states.setdefault(s, []).append(mu)
    return _reduce(_maximal(states), data)


def brute_unstable(xi: Sequence[Sequence[int]], data: RootSystemData, cap: int = MAX_ORACLE_CHARACTERS) -> set:
    """Weyl orbits of maximal unstable states, as canonical representatives."""
    xi = sorted(set(tuple(c) for c in xi))
    _check_cap(xi, cap)
    d = data.rank
    states: dict = {}
    for sub in combinations(xi, d):
        if span_dim(sub) < d:
            continue
        first = sub[0]
        diffs = [tuple(a - b for a, b in zip(c, first)) for c in sub[1:]]
        lam = nullspace_primitive(diffs, data.cocharacter_constraints, ncols=data.ambient_dim)
        if lam is None:
            continue
        v = _dot(lam, first)
        if v == 0:
            continue
        if v < 0:
            lam = tuple(-x for x in lam)
        s = frozenset(c for c in xi if _dot(lam, c) > 0)
        states.setdefault(s, []).append(lam)
    return _reduce(_maximal(states), data)


def orbit_keys(states, data: RootSystemData) -> set:
    """Canonical representatives of computed states, for comparison with the brute force."""
    return {canonical_representative(s.characters if hasattr(s, "characters") else s, data) for s in states}


def point_state_stability(state: Iterable[Sequence[int]], rank: int) -> str:
    """Classify a point from its state by where the origin sits in the hull."""
    pts = [tuple(c) for c in state]
    if not pts or not conv_contains_origin(pts):
        return UNSTABLE
    if span_dim(pts) == rank and relint_contains_origin(pts):
        return STABLE
    return STRICTLY_SEMISTABLE


def contained_in_translate(subset, states, data: RootSystemData) -> bool:
    """True iff some Weyl translate of ``subset`` lies inside one of ``states``."""
    subset = [tuple(c) for c in subset]
    targets = [frozenset(s.characters if hasattr(s, "characters") else s) for s in states]
    for w in data.weyl_elements:
        moved = {w.apply(c) for c in subset}
        if any(moved <= t for t in targets):
            return True
    return False


def random_consistency(xi, data: RootSystemData, p_s, p_ss, trials: int = 1000, seed: int = 0) -> list:
    """Classify random subsets directly and through the maximal states.

    Returns the list of disagreeing subsets (empty when consistent).
    """
    rng = random.Random(seed)
    xi = [tuple(c) for c in xi]
    bad = []
    for _ in range(trials):
        size = rng.randint(0, len(xi))
        subset = rng.sample(xi, size)
        label = point_state_stability(subset, data.rank)
        unstable = contained_in_translate(subset, p_ss, data)
        nonstable = contained_in_translate(subset, p_s, data)
        if (label == UNSTABLE) != unstable or (label != STABLE) != nonstable:
            bad.append((sorted(subset), label, unstable, nonstable))
    return bad
