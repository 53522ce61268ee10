"""Exact linear algebra and convex feasibility over the integers and rationals.

Everything here works on plain tuples of Python ``int`` (or ``Fraction`` where
a rational is unavoidable), so there is no overflow and no rounding.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

IntVector = tuple


class DimensionError(ValueError):
    """Vectors or matrices of incompatible shapes were combined."""


def pairing(lam: Sequence[int], chi: Sequence[int]) -> int:
    """Return the dot product of a cocharacter and a character."""
    if len(lam) != len(chi):
        raise DimensionError(f"cannot pair vectors of length {len(lam)} and {len(chi)}")
    return sum(a * b for a, b in zip(lam, chi))


def primitive(v: Iterable[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    v = tuple(v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return v
    return tuple(x // g for x in v)


def bareiss_echelon(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form.

    Returns the reduced integer rows (only the first ``rank`` are meaningful)
    and the list of pivot columns. All divisions are exact.
    """
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    for r in m:
        if len(r) != ncols:
            raise DimensionError("ragged matrix")
    nrows = len(m)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            mi = m[i]
            f = mi[c]
            mr = m[r]
            for j in range(c + 1, ncols):
                mi[j] = (piv * mi[j] - f * mr[j]) // prev
            mi[c] = 0
        # rows with a zero in column c still take the scaling step; later
        # divisions by ``prev`` are only exact if every row below is updated
        prev = piv
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence[int]]) -> int:
    return len(bareiss_echelon(rows)[1])


def is_linearly_independent(vs: Sequence[Sequence[int]]) -> bool:
    """True iff the vectors have full row rank."""
    return rank(vs) == len(vs)


def span_dim(vs: Iterable[Sequence[int]]) -> int:
    """Dimension of the linear span of a set of vectors."""
    vs = list(vs)
    if not vs:
        return 0
    return rank(vs)


def _kernel_from_echelon(m: list[list[int]], pivots: list[int], ncols: int) -> list[tuple[int, ...]]:
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x: list[Fraction] = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            row = m[r]
            s = sum((row[j] * x[j] for j in range(c + 1, ncols) if row[j]), Fraction(0))
            x[c] = -s / row[c]
        den = 1
        for q in x:
            den = den * q.denominator // gcd(den, q.denominator)
        basis.append(primitive(int(q * den) for q in x))
    return basis


def nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Integer basis (primitive vectors) of the right kernel of ``rows``."""
    if not rows:
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    m, pivots = bareiss_echelon(rows)
    return _kernel_from_echelon(m, pivots, ncols)


def nullspace_primitive(
    rows: Sequence[Sequence[int]],
    constraints: Sequence[Sequence[int]] = (),
    ncols: int | None = None,
) -> tuple[int, ...] | None:
    """Primitive generator of a one-dimensional solution space, else ``None``.

    Solves ``pairing(x, r) == 0`` for every ``r`` in ``rows`` and in
    ``constraints``. The constraints pin the ambient cocharacter space (the
    all-ones row for type A). Sign is not normalized.
    """
    allrows = [tuple(r) for r in rows] + [tuple(c) for c in constraints]
    if ncols is None:
        if not allrows:
            raise DimensionError("cannot infer the ambient dimension of an empty system")
        ncols = len(allrows[0])
    if not allrows:
        return (1,) if ncols == 1 else None
    m, pivots = bareiss_echelon(allrows)
    if ncols - len(pivots) != 1:
        return None
    return _kernel_from_echelon(m, pivots, ncols)[0]


def lp_feasible(
    equalities: Sequence[Sequence[Fraction | int]],
    rhs: Sequence[Fraction | int],
    lower_bounds: Sequence[Fraction | int],
) -> bool:
    """Decide whether ``A t = b`` has a solution with ``t >= lower_bounds``.

    Exact phase-1 simplex with Bland's rule. ``A`` is given row-wise.
    """
    nvars = len(lower_bounds)
    for row in equalities:
        if len(row) != nvars:
            raise DimensionError("equality row length does not match the number of variables")
    if len(rhs) != len(equalities):
        raise DimensionError("rhs length does not match the number of equalities")
    lb = [Fraction(x) for x in lower_bounds]
    # t = lb + s with s >= 0
    tab: list[list[Fraction]] = []
    for row, b in zip(equalities, rhs):
        r = [Fraction(x) for x in row]
        shifted = Fraction(b) - sum(a * l for a, l in zip(r, lb))
        if shifted < 0:
            r = [-a for a in r]
            shifted = -shifted
        tab.append(r + [shifted])
    nrows = len(tab)
    if nrows == 0:
        return True
    # artificial variable i occupies column nvars + i
    width = nvars + nrows
    for i, r in enumerate(tab):
        b = r.pop()
        r.extend(Fraction(1) if j == i else Fraction(0) for j in range(nrows))
        r.append(b)
    basis = [nvars + i for i in range(nrows)]
    # reduced costs for minimizing the sum of artificials
    cost = [Fraction(0)] * (width + 1)
    for r in tab:
        for j in range(nvars):
            cost[j] -= r[j]
        cost[width] -= r[width]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i, r in enumerate(tab):
            a = r[enter]
            if a > 0:
                ratio = r[width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            # unbounded below cannot happen for a phase-1 objective bounded by 0
            break
        prow = tab[leave]
        pv = prow[enter]
        if pv != 1:
            prow = [x / pv for x in prow]
            tab[leave] = prow
        for i, r in enumerate(tab):
            if i != leave and r[enter] != 0:
                f = r[enter]
                tab[i] = [x - f * y for x, y in zip(r, prow)]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, prow)]
        basis[leave] = enter
    return cost[width] == 0


def conv_contains_origin(points: Iterable[Sequence[int]]) -> bool:
    """True iff the origin lies in the convex hull of ``points``."""
    pts = [tuple(p) for p in points]
    if not pts:
        return False
    if any(not any(p) for p in pts):
        return True
    dim = len(pts[0])
    rows = [[p[i] for p in pts] for i in range(dim)]
    rows.append([1] * len(pts))
    return lp_feasible(rows, [0] * dim + [1], [0] * len(pts))


def relint_contains_origin(points: Iterable[Sequence[int]]) -> bool:
    """True iff the origin lies in the relative interior of the convex hull.

    Uses the strictly positive combination test: some ``t >= 1`` with
    ``sum(t_s * s) == 0``.
    """
    pts = sorted(set(tuple(p) for p in points))
    if not pts:
        return False
    dim = len(pts[0])
    rows = [[p[i] for p in pts] for i in range(dim)]
    return lp_feasible(rows, [0] * dim, [1] * len(pts))
