from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gitstrata.roots import RootSystemSpec, build
from gitstrata.weights import (
    DirectSum,
    Irrep,
    RepDomainError,
    RepParseError,
    Tensor,
    Wedge,
    dsum,
    evaluate,
    parse_rep_expr,
    support,
    tensor,
    wedge_power,
    weights_of_irrep,
    weyl_dimension,
)

# irreps exercised by the dimension check, with known dimensions
IRREPS = [
    ("A", 1, (2,), 3),
    ("A", 2, (3, 0), 10),
    ("A", 2, (1, 1), 8),
    ("A", 2, (2, 1), 15),
    ("A", 3, (3, 0, 0), 20),
    ("A", 3, (0, 1, 0), 6),
    ("A", 3, (1, 0, 1), 15),
    ("A", 4, (0, 0, 1, 0), 10),
    ("B", 2, (3, 0), 30),
    ("B", 2, (0, 1), 4),
    ("B", 3, (0, 0, 1), 8),
    ("B", 4, (0, 0, 1, 0), 84),
    ("C", 2, (0, 1), 5),
    ("C", 3, (0, 0, 1), 14),
    ("C", 4, (0, 0, 1, 0), 48),
    ("D", 4, (0, 0, 1, 0), 8),
    ("D", 4, (1, 0, 0, 0), 8),
    ("D", 4, (0, 1, 0, 0), 28),
    ("D", 5, (0, 0, 0, 0, 1), 16),
    ("B", 2, (1, 1), 16),
    ("C", 3, (1, 1, 0), 64),
    ("A", 3, (2, 0, 0), 10),
]


@pytest.mark.parametrize("family, rank, hw, dim", IRREPS)
def test_weyl_dimension_matches_multiplicities(family, rank, hw, dim):
    data = build(RootSystemSpec(family, rank))
    ws = weights_of_irrep(data, hw)
    assert weyl_dimension(data, hw) == dim
    assert ws.total_dim == dim


@pytest.mark.parametrize("family, rank, hw", [(f, r, hw) for f, r, hw, _ in IRREPS])
def test_weights_are_weyl_invariant(family, rank, hw):
    data = build(RootSystemSpec(family, rank))
    ws = weights_of_irrep(data, hw)
    for w in data.weyl_elements:
        assert {w.apply(v): m for v, m in ws.weights.items()} == ws.weights


@pytest.mark.parametrize(
    "family, rank, rep, size",
    [
        ("A", 3, "irrep(3,0,0)", 20),
        ("A", 2, "irrep(6,0)", 28),
        ("B", 4, "irrep(0,0,1,0)", 65),
        ("C", 4, "irrep(0,0,1,0)", 40),
        ("D", 4, "irrep(0,0,1,0)", 8),
        ("A", 4, "irrep(0,0,1,0)", 10),
        ("B", 2, "irrep(3,0)", 25),
        ("A", 2, "wedge(2,irrep(3,0))", 25),
        ("A", 3, "wedge(3,irrep(2,0,0))", 56),
    ],
)
def test_support_sizes(family, rank, rep, size):
    data = build(RootSystemSpec(family, rank))
    assert len(support(evaluate(parse_rep_expr(rep), data))) == size


def test_sl2_multiplicities():
    data = build(RootSystemSpec("A", 1))
    ws = weights_of_irrep(data, (4,))
    assert sorted(ws.weights) == [(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)]


def test_adjoint_zero_weight():
    data = build(RootSystemSpec("B", 2))
    ws = weights_of_irrep(data, (0, 2))  # adjoint of so(5)
    assert ws.total_dim == 10
    assert ws.weights[(0, 0)] == 2


def test_half_integral_spin():
    data = build(RootSystemSpec("B", 3))
    ws = weights_of_irrep(data, (0, 0, 1))
    assert ws.denom == 2
    assert all(abs(x) == 1 for w in ws.weights for x in w)
    assert support(ws)[0] == (Fraction(-1, 2),) * 3


def test_wedge_square_of_quadrics():
    data = build(RootSystemSpec("A", 3))
    ws = evaluate(parse_rep_expr("wedge(2, irrep(2,0,0))"), data)
    assert len(ws.weights) == 31
    assert ws.total_dim == 45


def test_wedge_top_and_bottom():
    data = build(RootSystemSpec("A", 2))
    v = weights_of_irrep(data, (1, 0))
    assert wedge_power(v, 3).weights == {(1, 1, 1): 1}
    assert wedge_power(v, 0).weights == {(0, 0, 0): 1}
    with pytest.raises(RepDomainError):
        wedge_power(v, 4)


def test_tensor_and_sum_dimensions():
    data = build(RootSystemSpec("C", 2))
    a = weights_of_irrep(data, (1, 0))
    b = weights_of_irrep(data, (0, 1))
    assert tensor(a, b).total_dim == 20
    assert dsum(a, b).total_dim == 9
    assert tensor(a, b) == tensor(b, a)


def test_mixed_denominators():
    data = build(RootSystemSpec("B", 2))
    spin = weights_of_irrep(data, (0, 1))
    vec = weights_of_irrep(data, (1, 0))
    both = dsum(spin, vec)
    assert both.denom == 2
    assert both.total_dim == 9
    # spin tensor spin has integral weights only
    assert tensor(spin, spin).denom == 1


@pytest.mark.parametrize(
    "text, tree",
    [
        ("irrep(3,0,0)", Irrep((3, 0, 0))),
        ("wedge(2, irrep(2,0,0))", Wedge(2, Irrep((2, 0, 0)))),
        ("dsum(irrep(1,0), tensor(irrep(0,1),irrep(1,0)))", DirectSum(Irrep((1, 0)), Tensor(Irrep((0, 1)), Irrep((1, 0))))),
        ("  IRREP( 1 , 0 ) ", Irrep((1, 0))),
    ],
)
def test_parse(text, tree):
    assert parse_rep_expr(text) == tree
    assert parse_rep_expr(str(tree)) == tree


@pytest.mark.parametrize(
    "text, pos",
    [("irrep(3,0", 9), ("spin(1)", 0), ("irrep(3;0)", 7), ("wedge(x, irrep(1))", 6), ("irrep(1) junk", 9), ("", 0)],
)
def test_parse_errors(text, pos):
    with pytest.raises(RepParseError) as exc:
        parse_rep_expr(text)
    assert exc.value.position == pos


@pytest.mark.parametrize("family, rank, rep", [("A", 2, "irrep(1,0,0)"), ("A", 2, "irrep(-1,0)"), ("A", 2, "wedge(0,irrep(1,0))")])
def test_domain_errors(family, rank, rep):
    data = build(RootSystemSpec(family, rank))
    with pytest.raises(RepDomainError):
        evaluate(parse_rep_expr(rep), data)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3))
def test_a2_tensor_dimension_is_multiplicative(a, b):
    data = build(RootSystemSpec("A", 2))
    x = weights_of_irrep(data, (a, b))
    y = weights_of_irrep(data, (b, a))
    assert x.total_dim == y.total_dim == weyl_dimension(data, (a, b))
    assert tensor(x, y).total_dim == x.total_dim * y.total_dim


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 6))
def test_wedge_dimension(d, k):
    data = build(RootSystemSpec("A", 2))
    v = weights_of_irrep(data, (d, 0))
    n = v.total_dim
    if k <= n:
        assert wedge_power(v, k).total_dim == comb(n, k)
