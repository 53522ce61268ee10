"""Weight systems of representations built from irreducibles.

A :class:`WeightSystem` maps weights (integer numerator vectors over a common
denominator ``denom``, which is 1 or 2) to multiplicities. Irreducibles come
from Freudenthal's formula; direct sums, tensor products and exterior powers
are computed on the weight multisets.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Union

from .kernel import DimensionError
from .roots import RootSystemData, fundamental_weights, to_dominant, weyl_orbit


class RepParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class RepDomainError(ValueError):
    """A representation expression is well formed but meaningless for the group."""


# -- expression tree -------------------------------------------------------


@dataclass(frozen=True)
class Irrep:
    highest_weight: tuple[int, ...]

    def __str__(self):
        return "irrep(" + ",".join(map(str, self.highest_weight)) + ")"


@dataclass(frozen=True)
class DirectSum:
    left: "RepExpr"
    right: "RepExpr"

    def __str__(self):
        return f"dsum({self.left},{self.right})"


@dataclass(frozen=True)
class Tensor:
    left: "RepExpr"
    right: "RepExpr"

    def __str__(self):
        return f"tensor({self.left},{self.right})"


@dataclass(frozen=True)
class Wedge:
    k: int
    inner: "RepExpr"

    def __str__(self):
        return f"wedge({self.k},{self.inner})"


RepExpr = Union[Irrep, DirectSum, Tensor, Wedge]

_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_]+)|(?P<punct>[(),]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise RepParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind, value=None):
        tok = self.tokens[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] if tok[0] != "end" else "end of input"
            raise RepParseError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def integer(self) -> int:
        return int(self.take("int")[1])

    def expr(self) -> RepExpr:
        _, name, pos = self.take("name")
        name = name.lower()
        self.take("punct", "(")
        if name == "irrep":
            coords = [self.integer()]
            while self.peek()[1] == ",":
                self.take("punct", ",")
                coords.append(self.integer())
            node: RepExpr = Irrep(tuple(coords))
        elif name in ("dsum", "tensor"):
            left = self.expr()
            self.take("punct", ",")
            right = self.expr()
            node = DirectSum(left, right) if name == "dsum" else Tensor(left, right)
        elif name == "wedge":
            k = self.integer()
            self.take("punct", ",")
            node = Wedge(k, self.expr())
        else:
            raise RepParseError(f"unknown constructor {name!r}", pos)
        self.take("punct", ")")
        return node


def parse_rep_expr(text: str) -> RepExpr:
    """Parse ``irrep(..) | dsum(e,e) | tensor(e,e) | wedge(k,e)``."""
    p = _Parser(text)
    node = p.expr()
    p.take("end")
    return node


# -- weight systems ---------------------------------------------------------


@dataclass(frozen=True)
class WeightSystem:
    weights: dict
    denom: int = 1
    ambient_dim: int = 0

    @property
    def total_dim(self) -> int:
        return sum(self.weights.values())

    def rescaled(self, denom: int) -> "WeightSystem":
        if denom == self.denom:
            return self
        f = denom // self.denom
        return WeightSystem({tuple(f * x for x in w): m for w, m in self.weights.items()}, denom, self.ambient_dim)

    def as_fractions(self) -> dict:
        return {tuple(Fraction(x, self.denom) for x in w): m for w, m in self.weights.items()}

    def __eq__(self, other):
        if not isinstance(other, WeightSystem):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.as_fractions() == other.as_fractions()

    def __hash__(self):
        return hash(frozenset(self.as_fractions().items()))


def _normalized(weights: dict, denom: int, dim: int) -> WeightSystem:
    weights = {w: m for w, m in weights.items() if m}
    if denom == 2 and all(x % 2 == 0 for w in weights for x in w):
        weights = {tuple(x // 2 for x in w): m for w, m in weights.items()}
        denom = 1
    return WeightSystem(weights, denom, dim)


def trivial(dim: int) -> WeightSystem:
    return WeightSystem({(0,) * dim: 1}, 1, dim)


def empty(dim: int) -> WeightSystem:
    return WeightSystem({}, 1, dim)


def _highest_weight_vector(data: RootSystemData, hw) -> tuple[Fraction, ...]:
    if len(hw) != data.rank:
        raise RepDomainError(f"highest weight needs {data.rank} coordinates for {data.spec}, got {len(hw)}")
    if any(a < 0 for a in hw):
        raise RepDomainError(f"highest weight {tuple(hw)} is not dominant")
    total = [Fraction(0)] * data.ambient_dim
    for a, omega in zip(hw, fundamental_weights(data)):
        for j, x in enumerate(omega):
            total[j] += a * x
    return tuple(total)


def weyl_dimension(data: RootSystemData, hw) -> int:
    """Weyl dimension formula, exactly."""
    lam2 = tuple(int(2 * x) for x in _highest_weight_vector(data, hw))
    num = Fraction(1)
    for alpha in data.positive_roots:
        lr = sum((l + r) * a for l, r, a in zip(lam2, data.rho2, alpha))
        rr = sum(r * a for r, a in zip(data.rho2, alpha))
        num *= Fraction(lr, rr)
    assert num.denominator == 1
    return int(num)


def dominant_multiplicities(data: RootSystemData, hw) -> dict:
    """Freudenthal's recursion on dominant weights, in doubled coordinates.

    Returns ``{2*mu: multiplicity}`` for every dominant weight ``mu`` of the
    irreducible with highest weight ``hw``.
    """
    lam2 = tuple(int(2 * x) for x in _highest_weight_vector(data, hw))
    roots2 = [tuple(2 * x for x in a) for a in data.positive_roots]
    rho2 = data.rho2

    def dot(u, v):
        return sum(a * b for a, b in zip(u, v))

    # dominant weights below lam: chains of positive-root subtractions suffice
    dominant = {lam2}
    frontier = [lam2]
    while frontier:
        nxt = []
        for mu in frontier:
            for a in roots2:
                nu = tuple(x - y for x, y in zip(mu, a))
                if nu not in dominant and to_dominant(data, nu) == nu:
                    dominant.add(nu)
                    nxt.append(nu)
        frontier = nxt

    def depth(mu):
        return dot(tuple(x - y for x, y in zip(lam2, mu)), rho2)

    lr = tuple(x + y for x, y in zip(lam2, rho2))
    top = dot(lr, lr)
    mult = {lam2: 1}

    def m(nu):
        return mult.get(to_dominant(data, nu), 0)

    for mu in sorted(dominant, key=lambda v: (depth(v), v)):
        if mu == lam2:
            continue
        mr = tuple(x + y for x, y in zip(mu, rho2))
        denom = top - dot(mr, mr)
        total = 0
        for a in roots2:
            k = 1
            while True:
                nu = tuple(x + k * y for x, y in zip(mu, a))
                mk = m(nu)
                if not mk:
                    break
                total += dot(nu, a) * mk
                k += 1
        q, r = divmod(2 * total, denom)
        assert r == 0, "Freudenthal recursion produced a non-integer multiplicity"
        mult[mu] = q
    return {mu: k for mu, k in mult.items() if k}


def weights_of_irrep(data: RootSystemData, hw) -> WeightSystem:
    hw = tuple(hw)
    dom = dominant_multiplicities(data, hw)
    weights = {}
    for mu, k in dom.items():
        for w in weyl_orbit(data, mu):
            weights[w] = k
    return _normalized(weights, 2, data.ambient_dim)


def _common(a: WeightSystem, b: WeightSystem) -> tuple[WeightSystem, WeightSystem]:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"weight systems live in dimensions {a.ambient_dim} and {b.ambient_dim}")
    d = lcm(a.denom, b.denom)
    return a.rescaled(d), b.rescaled(d)


def dsum(a: WeightSystem, b: WeightSystem) -> WeightSystem:
    a, b = _common(a, b)
    out = defaultdict(int, a.weights)
    for w, m in b.weights.items():
        out[w] += m
    return _normalized(dict(out), a.denom, a.ambient_dim)


def tensor(a: WeightSystem, b: WeightSystem) -> WeightSystem:
    a, b = _common(a, b)
    out = defaultdict(int)
    for w1, m1 in a.weights.items():
        for w2, m2 in b.weights.items():
            out[tuple(x + y for x, y in zip(w1, w2))] += m1 * m2
    return _normalized(dict(out), a.denom, a.ambient_dim)


def wedge_power(a: WeightSystem, k: int) -> WeightSystem:
    """Weights of the k-th exterior power, by the elementary symmetric recurrence."""
    n = a.total_dim
    if not 0 <= k <= n:
        raise RepDomainError(f"exterior power {k} out of range for a {n}-dimensional representation")
    zero = (0,) * a.ambient_dim
    # layers[c] maps a partial sum of c distinct slots to its count
    layers: list[dict] = [{zero: 1}] + [dict() for _ in range(k)]
    seen = 0
    for w, m in sorted(a.weights.items()):
        for _ in range(m):
            seen += 1
            for c in range(min(k, seen), 0, -1):
                src = layers[c - 1]
                if not src:
                    continue
                dst = layers[c]
                for s, cnt in src.items():
                    t = tuple(x + y for x, y in zip(s, w))
                    dst[t] = dst.get(t, 0) + cnt
    result = _normalized(layers[k], a.denom, a.ambient_dim)
    assert result.total_dim == comb(n, k)
    return result


def support(a: WeightSystem) -> list[tuple[Fraction, ...]]:
    """Characters with positive multiplicity, sorted."""
    return sorted(tuple(Fraction(x, a.denom) for x in w) for w, m in a.weights.items() if m > 0)


def evaluate(expr: RepExpr, data: RootSystemData) -> WeightSystem:
    if isinstance(expr, Irrep):
        return weights_of_irrep(data, expr.highest_weight)
    if isinstance(expr, DirectSum):
        return dsum(evaluate(expr.left, data), evaluate(expr.right, data))
    if isinstance(expr, Tensor):
        return tensor(evaluate(expr.left, data), evaluate(expr.right, data))
    if isinstance(expr, Wedge):
        inner = evaluate(expr.inner, data)
        if expr.k < 1:
            raise RepDomainError(f"exterior power must be positive, got {expr.k}")
        return wedge_power(inner, expr.k)
    raise TypeError(f"not a representation expression: {expr!r}")
