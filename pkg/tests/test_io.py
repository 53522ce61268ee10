from __future__ import annotations

import json
from fractions import Fraction

import pytest

from gitstrata.core import DomainError
from gitstrata.io import (
    STATS_COLUMNS,
    ProblemSpec,
    ResultDocument,
    SchemaError,
    decode_number,
    emit_stats_table,
    encode_number,
    monomial,
    read_stream,
    render_monomials,
    run,
)
from gitstrata.oracle import SizeCapError

PLANE_CURVES = {
    2: (6, 1, 4, 1, 2, 1),
    3: (10, 3, 5, 2, 1, 2),
    4: (15, 3, 8, 2, 2, 1),
    5: (21, 5, 11, 3, 3, 1),
    6: (28, 5, 13, 3, 2, 3),
    7: (36, 9, 17, 4, 4, 1),
    8: (45, 9, 21, 4, 4, 2),
    9: (55, 9, 24, 5, 4, 4),
    10: (66, 13, 29, 6, 6, 3),
    11: (78, 19, 34, 7, 7, 2),
    12: (91, 13, 38, 7, 6, 5),
    13: (105, 25, 44, 9, 9, 3),
    14: (120, 25, 50, 10, 10, 5),
    15: (136, 21, 55, 11, 10, 7),
}


@pytest.fixture(scope="module")
def cubic_doc():
    return run(ProblemSpec("A", 3, "irrep(3,0,0)", description="cubic surfaces"))


@pytest.mark.parametrize("x, enc", [(3, 3), (Fraction(-1, 2), "-1/2"), (Fraction(4, 2), 2), (0, 0)])
def test_number_encoding(x, enc):
    assert encode_number(x) == enc
    assert decode_number(enc) == Fraction(x)


@pytest.mark.parametrize("bad", [1.5, None, True, [1]])
def test_number_decoding_refuses_inexact(bad):
    with pytest.raises(SchemaError):
        decode_number(bad)


def test_run_cubic_surfaces(cubic_doc):
    assert cubic_doc.counts() == (20, 8, 15, 3, 3, 3)
    assert cubic_doc.scale == {"half_integral": 1, "type_a_projection": 4}
    assert cubic_doc.refinement_drops == {"stable": 0, "semistable": 0}
    # external coordinates are the exponent vectors of cubic monomials
    for c in cubic_doc.characters:
        assert all(isinstance(x, int) and x >= 0 for x in c) and sum(c) == 3
    assert cubic_doc.stats["p_ps_before_dedup"] == 5


def test_run_plane_cubics():
    doc = run(ProblemSpec("A", 2, "irrep(3,0)"))
    assert doc.counts() == (10, 3, 5, 2, 1, 2)


def test_run_pencils_without_polystable():
    doc = run(ProblemSpec("A", 3, "wedge(2, irrep(2,0,0))", tasks=["stable", "semistable"]))
    assert doc.counts()[:5] == (31, 15, 18, 5, 3)
    assert doc.p_ps is None


def test_round_trip(cubic_doc):
    text = cubic_doc.dumps()
    again = ResultDocument.loads(text)
    assert again == cubic_doc
    assert again.dumps() == text


def test_half_integral_external_coordinates():
    doc = run(ProblemSpec("D", 4, "irrep(0,0,1,0)"))
    assert doc.scale["half_integral"] == 2
    assert all(isinstance(x, str) and x.endswith("/2") for c in doc.characters for x in c)
    assert ResultDocument.loads(doc.dumps()) == doc
    assert doc.counts() == (8, 3, 5, 1, 2, 3)


def test_unknown_schema_refused(cubic_doc):
    d = json.loads(cubic_doc.dumps())
    d["schema"] = "gitstrata.result/99"
    with pytest.raises(SchemaError):
        ResultDocument.from_dict(d)
    with pytest.raises(SchemaError):
        ProblemSpec.from_dict({"schema": "other", "family": "A", "rank": 1, "rep": "irrep(1)"})


@pytest.mark.parametrize(
    "kwargs, msg",
    [
        (dict(tasks=["polystable"]), "requires the stable"),
        (dict(tasks=["nonsense"]), "unknown task"),
        (dict(tasks=["superset-stream"]), "stream path"),
    ],
)
def test_spec_validation(kwargs, msg):
    with pytest.raises(SchemaError, match=msg):
        ProblemSpec("A", 2, "irrep(3,0)", **kwargs)


def test_spec_round_trip():
    spec = ProblemSpec("B", 2, "irrep(3,0)", workers=2, fastpath=True)
    assert ProblemSpec.from_dict(json.loads(json.dumps(spec.to_dict()))) == spec
    with pytest.raises(SchemaError, match="unknown problem field"):
        ProblemSpec.from_dict({**spec.to_dict(), "colour": "red"})


def test_size_caps():
    with pytest.raises(SizeCapError):
        run(ProblemSpec("A", 2, "irrep(6,0)", max_characters=20))
    with pytest.raises(SizeCapError):
        run(ProblemSpec("A", 3, "irrep(3,0,0)", max_subsets=100))


@pytest.mark.parametrize("chi, text", [((2, 0, 0, 1), "X0^2*X3"), ((0, 3, 0, 0), "X1^3"), ((1, 1, 1, 0), "X0*X1*X2"), ((0, 0), "1")])
def test_monomial(chi, text):
    assert monomial(chi) == text


def test_render_cubic_surfaces(cubic_doc):
    text = render_monomials(cubic_doc)
    lines = text.splitlines()
    lam2 = [line for line in lines if line.startswith("lambda=(2,0,-1,-1)")][0]
    monomials = lam2.split(" ", 1)[1].split(", ")
    assert len(monomials) == 11
    assert "X1^3" in monomials
    assert all(m.startswith("X0") for m in monomials if m != "X1^3")


def test_render_refuses_other_representations():
    doc = run(ProblemSpec("A", 3, "wedge(2, irrep(2,0,0))", tasks=["stable"]))
    with pytest.raises(DomainError):
        render_monomials(doc)
    doc = run(ProblemSpec("B", 2, "irrep(3,0)", tasks=["stable"]))
    with pytest.raises(DomainError):
        render_monomials(doc)


def test_stats_table_single_and_empty(cubic_doc):
    text = emit_stats_table([cubic_doc])
    header, row = text.splitlines()
    assert header.split() == list(STATS_COLUMNS)
    assert row.split()[-6:] == ["20", "8", "15", "3", "3", "3"]
    assert emit_stats_table([]).splitlines() == ["  ".join(STATS_COLUMNS)]
    csv_text = emit_stats_table([cubic_doc], delimiter=",")
    assert csv_text.splitlines()[1].split(",")[-6:] == ["20", "8", "15", "3", "3", "3"]


def test_stats_table_plane_curves():
    docs = [run(ProblemSpec("A", 2, f"irrep({d},0)", description=f"degree {d}")) for d in PLANE_CURVES]
    rows = emit_stats_table(docs, delimiter="\t").splitlines()[1:]
    assert len(rows) == 14
    for d, row in zip(PLANE_CURVES, rows):
        assert tuple(int(x) for x in row.split("\t")[-6:]) == PLANE_CURVES[d]


def test_stream_file(tmp_path):
    path = tmp_path / "s.ndjson"
    spec = ProblemSpec("A", 3, "irrep(3,0,0)", tasks=["stable", "superset-stream"], stream=str(path))
    doc = run(spec)
    header, records = read_stream(str(path))
    assert len(header["characters"]) == 20
    assert len(records) == doc.stats["stream_records"] > 0
    for rec in records:
        assert set(rec) == {"rank", "subset", "witness", "state"}
        int(rec["state"], 16)
    path.write_text('{"schema": "gitstrata.stream/7"}\n')
    with pytest.raises(SchemaError):
        read_stream(str(path))


def test_checkpointed_run_matches(tmp_path):
    base = run(ProblemSpec("A", 3, "irrep(3,0,0)"))
    ck = str(tmp_path / "run")
    spec = ProblemSpec("A", 3, "irrep(3,0,0)", checkpoint=ck, checkpoint_every=50)
    first = run(spec)
    again = run(spec)
    assert first.dumps(exclude_times=True) == base.dumps(exclude_times=True)
    assert again.dumps(exclude_times=True) == base.dumps(exclude_times=True)
    assert (tmp_path / "run.spec.json").exists()
