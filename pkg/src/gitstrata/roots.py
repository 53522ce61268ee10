"""Root data for the classical types A, B, C and D in standard coordinates.

Cocharacters and characters share one coordinate space and are paired by
the dot product. For type A the ambient space is ``Z^(n+1)`` and cocharacters
live in the sum-zero sublattice; for B, C and D the ambient space is ``Z^n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .kernel import nullspace_primitive, pairing

FAMILIES = ("A", "B", "C", "D")
MAX_RANK = 12


class RootSystemError(ValueError):
    """Unsupported family or rank."""


@dataclass(frozen=True)
class RootSystemSpec:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise RootSystemError(f"unsupported root system family {self.family!r}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise RootSystemError(f"rank must be a positive integer, got {self.rank!r}")
        if self.family == "D" and self.rank < 2:
            raise RootSystemError("type D requires rank >= 2")
        if self.rank > MAX_RANK:
            raise RootSystemError(f"rank {self.rank} exceeds the supported maximum {MAX_RANK}")

    def __str__(self):
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class WeylElement:
    """A signed permutation: ``(w v)[i] = signs[i] * v[perm[i]]``."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "WeylElement":
        return cls(tuple(range(n)), (1,) * n)

    @property
    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.perm)) and all(s == 1 for s in self.signs)

    def apply(self, v: Sequence) -> tuple:
        return tuple(s * v[p] for p, s in zip(self.perm, self.signs))

    def compose(self, other: "WeylElement") -> "WeylElement":
        """The element acting as ``self`` after ``other``."""
        perm = tuple(other.perm[p] for p in self.perm)
        signs = tuple(s * other.signs[p] for p, s in zip(self.perm, self.signs))
        return WeylElement(perm, signs)

    def inverse(self) -> "WeylElement":
        n = len(self.perm)
        perm = [0] * n
        signs = [1] * n
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = i
            signs[p] = s
        return WeylElement(tuple(perm), tuple(signs))


def apply(w: WeylElement, v: Sequence) -> tuple:
    return w.apply(v)


def _unit(n, i, c=1):
    return tuple(c if j == i else 0 for j in range(n))


def _simple_roots(family: str, n: int) -> tuple[int, list[tuple[int, ...]]]:
    if family == "A":
        dim = n + 1
        return dim, [tuple(1 if j == i else -1 if j == i + 1 else 0 for j in range(dim)) for i in range(n)]
    dim = n
    roots = [tuple(1 if j == i else -1 if j == i + 1 else 0 for j in range(dim)) for i in range(n - 1)]
    if family == "B":
        roots.append(_unit(dim, n - 1))
    elif family == "C":
        roots.append(_unit(dim, n - 1, 2))
    else:
        roots.append(tuple(1 if j in (n - 2, n - 1) else 0 for j in range(dim)))
    return dim, roots


def _positive_roots(family: str, n: int, dim: int) -> list[tuple[int, ...]]:
    out = []
    for i in range(dim):
        for j in range(i + 1, dim):
            minus = [0] * dim
            minus[i], minus[j] = 1, -1
            out.append(tuple(minus))
            if family != "A":
                plus = [0] * dim
                plus[i], plus[j] = 1, 1
                out.append(tuple(plus))
    if family == "B":
        out.extend(_unit(dim, i) for i in range(dim))
    elif family == "C":
        out.extend(_unit(dim, i, 2) for i in range(dim))
    return sorted(out, reverse=True)


def _reflection(root: tuple[int, ...]) -> WeylElement:
    """Simple reflections of the standard realizations are signed permutations."""
    n = len(root)
    support = [i for i, x in enumerate(root) if x]
    perm = list(range(n))
    signs = [1] * n
    if len(support) == 1:
        signs[support[0]] = -1
    else:
        i, j = support
        perm[i], perm[j] = j, i
        if root[i] == root[j]:
            signs[i] = signs[j] = -1
    return WeylElement(tuple(perm), tuple(signs))


def closure(generators: Sequence[WeylElement], n: int) -> list[WeylElement]:
    """All products of the generators, identity first, in breadth-first order."""
    e = WeylElement.identity(n)
    seen = {e}
    out = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for w in frontier:
            for g in generators:
                h = g.compose(w)
                if h not in seen:
                    seen.add(h)
                    out.append(h)
                    nxt.append(h)
        frontier = nxt
    return out


@dataclass(frozen=True)
class RootSystemData:
    spec: RootSystemSpec
    ambient_dim: int
    simple_roots: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    rho2: tuple[int, ...]
    chamber_rays: tuple[tuple[int, ...], ...]
    # rows that every cocharacter must annihilate (the all-ones row for type A)
    cocharacter_constraints: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def family(self) -> str:
        return self.spec.family

    @cached_property
    def simple_reflections(self) -> tuple[WeylElement, ...]:
        return tuple(_reflection(a) for a in self.simple_roots)

    @cached_property
    def weyl_elements(self) -> tuple[WeylElement, ...]:
        return tuple(closure(self.simple_reflections, self.ambient_dim))

    @cached_property
    def w_prime(self) -> tuple[WeylElement, ...]:
        return tuple(compute_w_prime(self))

    def weyl_order(self) -> int:
        return weyl_group_order(self.spec)


def weyl_group_order(spec: RootSystemSpec) -> int:
    from math import factorial

    n = spec.rank
    if spec.family == "A":
        return factorial(n + 1)
    if spec.family in ("B", "C"):
        return 2**n * factorial(n)
    return 2 ** (n - 1) * factorial(n)


def build(spec: RootSystemSpec) -> RootSystemData:
    n = spec.rank
    dim, simple = _simple_roots(spec.family, n)
    positive = _positive_roots(spec.family, n, dim)
    rho2 = tuple(sum(col) for col in zip(*positive))
    constraints = ((1,) * dim,) if spec.family == "A" else ()
    rays = []
    for i in range(n):
        others = [a for j, a in enumerate(simple) if j != i]
        g = nullspace_primitive(others, constraints, ncols=dim)
        if pairing(g, simple[i]) < 0:
            g = tuple(-x for x in g)
        rays.append(g)
    return RootSystemData(
        spec=spec,
        ambient_dim=dim,
        simple_roots=tuple(simple),
        positive_roots=tuple(positive),
        rho2=rho2,
        chamber_rays=tuple(rays),
        cocharacter_constraints=constraints,
    )


def in_chamber(data: RootSystemData, lam: Sequence[int]) -> bool:
    """Closed fundamental chamber membership."""
    return all(pairing(lam, a) >= 0 for a in data.simple_roots)


def compute_w_prime(data: RootSystemData) -> list[WeylElement]:
    """Non-identity elements fixing at least one chamber ray.

    The stabilizer of a ray is the parabolic subgroup generated by the simple
    reflections orthogonal to it, so each stabilizer is built by closure.
    """
    seen = set()
    out = []
    for gamma in data.chamber_rays:
        gens = [s for s, a in zip(data.simple_reflections, data.simple_roots) if pairing(gamma, a) == 0]
        for w in closure(gens, data.ambient_dim):
            if w.is_identity or w in seen:
                continue
            seen.add(w)
            out.append(w)
    return out


def fundamental_weights(data: RootSystemData) -> list[tuple[Fraction, ...]]:
    """Fundamental weights in ambient coordinates.

    Type A uses the GL convention ``omega_i = e_1 + ... + e_i`` so that
    weights of ``irrep(d, 0, ..., 0)`` are exponent vectors of degree ``d``.
    """
    fam, n, dim = data.family, data.rank, data.ambient_dim
    half = Fraction(1, 2)

    def ones(k, value=Fraction(1)):
        return tuple(value if j < k else Fraction(0) for j in range(dim))

    if fam in ("A", "C"):
        return [ones(i) for i in range(1, n + 1)]
    if fam == "B":
        return [ones(i) for i in range(1, n)] + [ones(n, half)]
    out = [ones(i) for i in range(1, n - 1)]
    out.append(tuple(half if j < n - 1 else -half for j in range(dim)))
    out.append(ones(n, half))
    return out


def to_dominant(data: RootSystemData, v: Sequence) -> tuple:
    """The unique dominant element of the W-orbit of ``v`` (ambient coordinates)."""
    fam = data.family
    if fam == "A":
        return tuple(sorted(v, reverse=True))
    absv = sorted((abs(x) for x in v), reverse=True)
    if fam in ("B", "C"):
        return tuple(absv)
    negatives = sum(1 for x in v if x < 0)
    if negatives % 2 and absv[-1] != 0:
        absv[-1] = -absv[-1]
    return tuple(absv)


def weyl_orbit(data: RootSystemData, v: Sequence) -> Iterator[tuple]:
    """Distinct elements of the W-orbit of a weight, without materializing W."""
    from itertools import permutations, product

    fam = data.family
    if fam == "A":
        yield from sorted(set(permutations(v)), reverse=True)
        return
    seen = set()
    for p in set(permutations(v)):
        nz = [i for i, x in enumerate(p) if x != 0]
        for flips in product((1, -1), repeat=len(nz)):
            if fam == "D" and len(nz) == len(p) and flips.count(-1) % 2:
                continue
            w = list(p)
            for i, s in zip(nz, flips):
                w[i] = s * w[i]
            t = tuple(w)
            if t not in seen:
                seen.add(t)
    yield from sorted(seen, reverse=True)
