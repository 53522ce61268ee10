"""Maximal non-stable, maximal unstable and T-polystable states.

Characters of a problem are indexed once, and every state is carried as a
Python ``int`` bitmask over that index so subset tests are single bitwise
operations. Witnesses (one-parameter subgroups) are primitive integer vectors
in the same coordinates as the characters.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .kernel import (
    conv_contains_origin,
    nullspace,
    nullspace_primitive,
    pairing,
    primitive,
    relint_contains_origin,
    span_dim,
)
from .roots import RootSystemData, WeylElement, in_chamber
from .weights import WeightSystem

log = logging.getLogger(__name__)


class DomainError(ValueError):
    """The problem is outside the domain of an operation."""


class PreconditionError(RuntimeError):
    """The semistable computation needs a full-dimensional state around the origin."""


@dataclass(frozen=True, order=True)
class State:
    """A canonically sorted set of characters, with an optional witness.

    Equality and hashing look only at the characters; the witness records
    which one-parameter subgroup produced the state.
    """

    characters: tuple[tuple[int, ...], ...]
    witness: tuple[int, ...] | None = field(default=None, compare=False)

    def __len__(self):
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)

    def __contains__(self, chi):
        return tuple(chi) in self.characters

    def issubset(self, other: "State") -> bool:
        return set(self.characters) <= set(other.characters)


def as_state(chars: Iterable[Sequence[int]], witness=None) -> State:
    return State(tuple(sorted(set(tuple(c) for c in chars))), None if witness is None else tuple(witness))


@dataclass(frozen=True)
class Options:
    use_full_w: bool = False
    fastpath: bool = False
    fallback: bool = False
    workers: int = 1
    chunk_size: int = 0
    checkpoint: str | None = None
    checkpoint_every: int = 0


class Problem:
    """Indexed characters of a representation together with its root data.

    ``characters`` are internal integer coordinates. For type A these are the
    ambient exponent vectors projected to the sum-zero sublattice and scaled
    by ``n + 1``; for the other types they are the weight numerators over
    ``half_scale`` (1, or 2 when a weight is half-integral).
    """

    def __init__(self, data: RootSystemData, characters, external=None, half_scale: int = 1, fallback: bool = False):
        chars = sorted(set(tuple(int(x) for x in c) for c in characters))
        if not chars:
            raise DomainError("the state of the representation is empty")
        for c in chars:
            if len(c) != data.ambient_dim:
                raise DomainError(f"character {c} does not live in dimension {data.ambient_dim}")
        self.data = data
        self.chars: tuple[tuple[int, ...], ...] = tuple(chars)
        self.index = {c: i for i, c in enumerate(self.chars)}
        self.half_scale = half_scale
        self.projection_scale = data.rank + 1 if data.family == "A" else 1
        self.fallback = fallback
        if external is None:
            external = {c: c for c in self.chars}
        self.external = external
        self.full_mask = (1 << len(self.chars)) - 1
        self._perm_cache: dict = {}

    @classmethod
    def from_weights(cls, data: RootSystemData, ws: WeightSystem, fallback: bool = False) -> "Problem":
        n1 = data.rank + 1
        external: dict = {}
        for w, m in sorted(ws.weights.items()):
            if m <= 0:
                continue
            if data.family == "A":
                if ws.denom != 1:
                    raise DomainError("type A weights must be integral")
                s = sum(w)
                internal = tuple(n1 * x - s for x in w)
                ext = tuple(w)
            else:
                internal = tuple(w)
                ext = tuple(Fraction(x, ws.denom) for x in w)
            external.setdefault(internal, ext)
        return cls(data, external.keys(), external, ws.denom if data.family != "A" else 1, fallback)

    def __len__(self):
        return len(self.chars)

    # -- cocharacter space ------------------------------------------------

    @cached_property
    def constraints(self) -> tuple[tuple[int, ...], ...]:
        """Rows every candidate one-parameter subgroup must annihilate.

        Normally the root datum's constraints. In fallback mode cocharacters
        are further restricted to the span of the state, which is harmless
        because pairings only see that span.
        """
        if not self.fallback:
            return self.data.cocharacter_constraints
        return tuple(nullspace(list(self.chars), self.data.ambient_dim))

    @cached_property
    def effective_rank(self) -> int:
        if not self.fallback:
            return self.data.rank
        return span_dim(self.chars)

    def in_chamber(self, lam) -> bool:
        return True if self.fallback else in_chamber(self.data, lam)

    # -- states -------------------------------------------------------------

    def mask_of(self, chars: Iterable[Sequence[int]]) -> int:
        m = 0
        for c in chars:
            m |= 1 << self.index[tuple(c)]
        return m

    def chars_of(self, mask: int) -> tuple[tuple[int, ...], ...]:
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(self.chars[i])
            mask >>= 1
            i += 1
        return tuple(out)

    def indices_of(self, mask: int) -> list[int]:
        return [i for i in range(len(self.chars)) if mask >> i & 1]

    def state(self, mask: int, witness=None) -> State:
        return State(self.chars_of(mask), None if witness is None else tuple(witness))

    def ge_mask(self, lam) -> int:
        m = 0
        for i, c in enumerate(self.chars):
            if sum(a * b for a, b in zip(lam, c)) >= 0:
                m |= 1 << i
        return m

    def gt_mask(self, lam) -> int:
        m = 0
        for i, c in enumerate(self.chars):
            if sum(a * b for a, b in zip(lam, c)) > 0:
                m |= 1 << i
        return m

    def eq_mask(self, lam) -> int:
        m = 0
        for i, c in enumerate(self.chars):
            if sum(a * b for a, b in zip(lam, c)) == 0:
                m |= 1 << i
        return m

    def weyl_permutation(self, g: WeylElement) -> tuple[int, ...]:
        """Index permutation induced by ``g`` on the characters."""
        perm = self._perm_cache.get(g)
        if perm is None:
            try:
                perm = tuple(self.index[g.apply(c)] for c in self.chars)
            except KeyError:
                raise DomainError("the state is not invariant under the Weyl group") from None
            self._perm_cache[g] = perm
        return perm

    def act(self, g: WeylElement, mask: int) -> int:
        perm = self.weyl_permutation(g)
        out = 0
        for i in self.indices_of(mask):
            out |= 1 << perm[i]
        return out

    def external_of(self, chi) -> tuple:
        return self.external[tuple(chi)]

    def zero_index(self) -> int | None:
        return self.index.get((0,) * self.data.ambient_dim)


# -- essential characters -----------------------------------------------------


def _proportional(u, v) -> bool:
    """True iff u = c*v for some real c (either sign)."""
    return span_dim([u, v]) < 2


def essential_stable(problem: Problem) -> list[tuple[int, ...]]:
    """Characters sufficient for enumerating chamber-witnessed maximal non-stable states.

    Keeps characters whose orthogonal hyperplane meets the chamber away from
    the origin, drops the trivial character, and keeps one representative per
    proportionality class (the first in canonical order).
    """
    if problem.fallback:
        a2 = [c for c in problem.chars if any(c)]
    else:
        rays = problem.data.chamber_rays
        a2 = []
        for c in problem.chars:
            if not any(c):
                continue
            values = [pairing(g, c) for g in rays]
            if any(v >= 0 for v in values) and not all(v > 0 for v in values):
                a2.append(c)
    a3: list[tuple[int, ...]] = []
    directions = set()
    for c in a2:
        key = _direction(c)
        if key in directions:
            continue
        directions.add(key)
        a3.append(c)
    return a3


def _direction(c) -> tuple[int, ...]:
    """Primitive vector of the line through c, sign fixed by the first nonzero entry."""
    p = primitive(c)
    first = next(x for x in p if x)
    return p if first > 0 else tuple(-x for x in p)


def essential_semistable(problem: Problem) -> list[tuple[int, ...]]:
    """Characters sufficient for enumerating chamber-witnessed maximal unstable states."""
    if problem.fallback:
        return list(problem.chars)
    rays = problem.data.chamber_rays
    profile = {c: tuple(pairing(g, c) for g in rays) for c in problem.chars}
    b1 = [c for c in problem.chars if any(v > 0 for v in profile[c])]
    k = [c for c in b1 if all(v > 0 for v in profile[c])]
    non_minimal = set()
    for c in k:
        pc = profile[c]
        for c2 in k:
            if all(a > b for a, b in zip(pc, profile[c2])):
                non_minimal.add(c)
                break
    return [c for c in b1 if c not in non_minimal]


def semistable_intersection(problem: Problem) -> tuple[list, list]:
    """The set K of characters positive on every ray, and its minimal elements."""
    rays = problem.data.chamber_rays
    profile = {c: tuple(pairing(g, c) for g in rays) for c in problem.chars}
    k = [c for c in problem.chars if all(v > 0 for v in profile[c])]
    minimal = [c for c in k if not any(all(a > b for a, b in zip(profile[c], profile[c2])) for c2 in k)]
    return k, minimal


# -- witnesses ---------------------------------------------------------------


def stable_witnesses(problem: Problem, subset: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Chamber one-parameter subgroups orthogonal to a (d-1)-subset, if independent."""
    lam = nullspace_primitive(subset, problem.constraints, ncols=problem.data.ambient_dim)
    if lam is None:
        return []
    neg = tuple(-x for x in lam)
    if problem.fallback:
        return [lam, neg]
    if problem.in_chamber(lam):
        return [lam]
    if problem.in_chamber(neg):
        return [neg]
    return []


def semistable_witness(problem: Problem, subset: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """The one-parameter subgroup taking one common positive value on a d-subset.

    Returns ``None`` when the subset is dependent, the common value is zero,
    or the subgroup leaves the chamber.
    """
    first = subset[0]
    diffs = [tuple(a - b for a, b in zip(c, first)) for c in subset[1:]]
    lam = nullspace_primitive(diffs, problem.constraints, ncols=problem.data.ambient_dim)
    if lam is None:
        return None
    v = pairing(lam, first)
    if v == 0:
        return None
    if v < 0:
        lam = tuple(-x for x in lam)
    if not problem.in_chamber(lam):
        return None
    return lam


def maximality_fastpath(problem: Problem, lam) -> bool:
    """Sufficient test that the non-negative state of ``lam`` is maximal.

    True when the trivial character is interior to the hull of the zero
    slice taken inside the hyperplane orthogonal to ``lam``.
    """
    zero_slice = problem.chars_of(problem.eq_mask(lam))
    return zero_slice_is_interior(zero_slice, problem.effective_rank)


def zero_slice_is_interior(zero_slice, rank: int) -> bool:
    if not zero_slice:
        return False
    if span_dim(zero_slice) != rank - 1:
        return False
    return relint_contains_origin(zero_slice)


# -- antichains ----------------------------------------------------------------


class Antichain:
    """Inclusion-maximal masks with the rank and witness of their first producer."""

    def __init__(self):
        self.entries: dict[int, tuple[int, tuple[int, ...]]] = {}

    def __len__(self):
        return len(self.entries)

    def insert(self, mask: int, rank: int, witness, known_maximal: bool = False) -> bool:
        current = self.entries.get(mask)
        if current is not None:
            if rank < current[0]:
                self.entries[mask] = (rank, witness)
            return False
        if not known_maximal:
            for other in self.entries:
                if mask & ~other == 0:
                    return False
        doomed = [other for other in self.entries if other & ~mask == 0]
        for other in doomed:
            del self.entries[other]
        self.entries[mask] = (rank, witness)
        return True

    def merge(self, other: "Antichain") -> None:
        for mask, (rank, witness) in sorted(other.entries.items(), key=lambda kv: kv[1][0]):
            self.insert(mask, rank, witness)

    def items(self):
        """Entries ordered by the rank of their producing subset."""
        return sorted(self.entries.items(), key=lambda kv: kv[1][0])


def weyl_refine(problem: Problem, candidates, strict: bool, use_full_w: bool = False) -> tuple[list, int]:
    """Drop candidates whose Weyl translate is strictly inside another candidate.

    ``candidates`` is a sequence of ``(mask, witness)``. ``strict`` selects
    positive states (unstable) instead of non-negative ones. Returns the kept
    candidates and the number dropped.
    """
    if problem.fallback or len(candidates) == 0:
        return list(candidates), 0
    group = problem.data.weyl_elements if use_full_w else problem.data.w_prime
    masks = [m for m, _ in candidates]
    kept = []
    dropped = 0
    for mask, lam in candidates:
        maximal = True
        for g in group:
            if g.is_identity:
                continue
            glam = g.apply(lam)
            gmask = problem.gt_mask(glam) if strict else problem.ge_mask(glam)
            if gmask == mask:
                continue
            if any(gmask & ~t == 0 and gmask != t for t in masks):
                maximal = False
                break
        if maximal:
            kept.append((mask, lam))
        else:
            dropped += 1
    return kept, dropped


# -- polystable strata --------------------------------------------------------


def _flat_closure(vectors: Sequence[tuple[int, ...]], members: Iterable[int]) -> frozenset[int]:
    """Indices of ``vectors`` lying in the span of the given members."""
    members = list(members)
    if not members:
        return frozenset()
    basis = [vectors[i] for i in members]
    r = span_dim(basis)
    return frozenset(i for i, v in enumerate(vectors) if span_dim(basis + [v]) == r)


def proper_flats(vectors: Sequence[tuple[int, ...]]) -> set[frozenset[int]]:
    """All flats of the vector configuration of rank below the full rank.

    Flats are indexed subsets closed under taking span; each is built by
    extending a smaller flat by one vector and closing.
    """
    full = span_dim(vectors)
    zero = frozenset(i for i, v in enumerate(vectors) if not any(v))
    flats = {zero}
    layer = {zero}
    for _ in range(full - 1):
        nxt = set()
        for f in layer:
            for i in range(len(vectors)):
                if i in f:
                    continue
                g = _flat_closure(vectors, list(f) + [i])
                nxt.add(g)
        flats |= nxt
        layer = nxt
    return flats


def polystable_candidates_powerset(vectors: Sequence[tuple[int, ...]]) -> set[frozenset[int]]:
    """Literal reading of the subset loop: every T' of lower dimension with the
    origin in its relative interior, mapped to its flat. Exponential."""
    from itertools import combinations

    full = span_dim(vectors)
    out = set()
    n = len(vectors)
    for k in range(1, n + 1):
        for sub in combinations(range(n), k):
            pts = [vectors[i] for i in sub]
            if span_dim(pts) >= full:
                continue
            if relint_contains_origin(pts):
                out.add(_flat_closure(vectors, sub))
    return out


def polystable_strata(problem: Problem, p_s: Sequence[State], use_powerset: bool = False) -> tuple[list[State], int]:
    """T-polystable strata from the zero slices of the maximal non-stable states.

    Returns the strata (one per Weyl orbit unless in fallback mode) and the
    number of distinct strata before the Weyl identification.
    """
    found: dict[frozenset, int] = {}
    for st in p_s:
        if st.witness is None:
            raise DomainError("polystable strata need witnessed non-stable states")
        zmask = problem.eq_mask(st.witness)
        zchars = problem.chars_of(zmask)
        if not zchars or not conv_contains_origin(zchars):
            continue
        dim = span_dim(zchars)
        if relint_contains_origin(zchars):
            found.setdefault(frozenset(zchars), dim)
        local = list(zchars)
        flats = polystable_candidates_powerset(local) if use_powerset else proper_flats(local)
        for flat in flats:
            pts = [local[i] for i in flat]
            if not pts or span_dim(pts) >= dim:
                continue
            if not relint_contains_origin(pts):
                continue
            # the span of a sub-slice meets the whole state only inside the slice
            found.setdefault(frozenset(pts), span_dim(pts))
    strata = sorted(found, key=lambda s: sorted(s))
    before = len(strata)
    if problem.fallback:
        kept = strata
    else:
        kept = weyl_dedupe(problem, strata)
    out = []
    for s in kept:
        st = as_state(s)
        out.append(st)
    return out, before


def canonical_key(problem: Problem, chars: Iterable[Sequence[int]], group=None) -> tuple:
    """Lexicographically smallest sorted character list over the Weyl orbit."""
    chars = [tuple(c) for c in chars]
    if group is None:
        group = problem.data.weyl_elements
    return min(tuple(sorted(g.apply(c) for c in chars)) for g in group)


def weyl_dedupe(problem: Problem, sets: Sequence[Iterable]) -> list:
    """One member per Weyl orbit: the member with the smallest sorted character list."""
    best: dict[tuple, tuple] = {}
    for s in sets:
        key = canonical_key(problem, s)
        own = tuple(sorted(s))
        if key not in best or own < best[key]:
            best[key] = own
    return sorted(best.values())


# -- checks ------------------------------------------------------------------


def assumption_check(problem: Problem) -> tuple[bool, str]:
    """Full-dimensional state with the trivial character in its interior."""
    d = span_dim(problem.chars)
    if d != problem.data.rank:
        return False, f"state is not full-dimensional (span dimension {d} < rank {problem.data.rank})"
    if not relint_contains_origin(problem.chars):
        return False, "trivial character is not in the interior of the convex hull of the state"
    return True, "ok"

