"""Problem specifications, result documents, statistics tables and rendering."""

from __future__ import annotations

import csv
import io as _io
import json
import logging
import os
import time
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from math import comb

from .algorithms import semistable_max_states, stable_max_states, superset_stream
from .core import DomainError, Options, Problem, State, polystable_strata
from .kernel import span_dim
from .oracle import SizeCapError
from .roots import RootSystemSpec, build
from .weights import Irrep, evaluate, parse_rep_expr

log = logging.getLogger(__name__)

SPEC_SCHEMA = "gitstrata.problem/1"
RESULT_SCHEMA = "gitstrata.result/1"
STREAM_SCHEMA = "gitstrata.stream/1"

TASKS = ("stable", "semistable", "polystable", "superset-stream")


class SchemaError(ValueError):
    """A document has an unknown schema id or a malformed field."""


# -- numbers ------------------------------------------------------------------


def encode_number(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decode_number(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise SchemaError(f"not an exact number: {v!r}")
    return Fraction(v)


# -- problem specification ----------------------------------------------------


@dataclass
class ProblemSpec:
    family: str
    rank: int
    rep: str
    tasks: list = field(default_factory=lambda: ["stable", "semistable", "polystable"])
    description: str = ""
    use_full_w: bool = False
    fastpath: bool = False
    fallback: bool = False
    workers: int = 1
    checkpoint: str | None = None
    checkpoint_every: int = 0
    output: str | None = None
    stream: str | None = None
    stream_dedupe: bool = False
    max_characters: int = 2000
    max_subsets: int = 50_000_000

    def __post_init__(self):
        self.tasks = list(self.tasks)
        unknown = [t for t in self.tasks if t not in TASKS]
        if unknown:
            raise SchemaError(f"unknown task(s) {', '.join(unknown)}; choose from {', '.join(TASKS)}")
        if "polystable" in self.tasks and "stable" not in self.tasks:
            raise SchemaError("the polystable task requires the stable task")
        if "superset-stream" in self.tasks and not self.stream:
            raise SchemaError("the superset-stream task needs a stream path")
        RootSystemSpec(self.family, self.rank)
        parse_rep_expr(self.rep)

    def to_dict(self) -> dict:
        return {"schema": SPEC_SCHEMA, **asdict(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "ProblemSpec":
        d = dict(d)
        schema = d.pop("schema", SPEC_SCHEMA)
        if schema != SPEC_SCHEMA:
            raise SchemaError(f"unsupported problem schema {schema!r}")
        names = {f.name for f in fields(cls)}
        extra = set(d) - names
        if extra:
            raise SchemaError(f"unknown problem field(s): {', '.join(sorted(extra))}")
        return cls(**d)

    def options(self) -> Options:
        return Options(
            use_full_w=self.use_full_w,
            fastpath=self.fastpath,
            fallback=self.fallback,
            workers=self.workers,
            checkpoint_every=self.checkpoint_every,
        )

    def echo(self) -> dict:
        """The fields that determine the mathematical result."""
        return {
            "description": self.description,
            "family": self.family,
            "rank": self.rank,
            "rep": self.rep,
            "tasks": list(self.tasks),
            "use_full_w": self.use_full_w,
            "fastpath": self.fastpath,
            "fallback": self.fallback,
        }


def load_spec(path: str) -> ProblemSpec:
    with open(path) as fh:
        return ProblemSpec.from_dict(json.load(fh))


# -- result document ----------------------------------------------------------


@dataclass
class ResultDocument:
    problem: dict
    scale: dict
    characters: list
    p_s: list | None = None
    p_ss: list | None = None
    p_ps: list | None = None
    stats: dict = field(default_factory=dict)
    refinement_drops: dict = field(default_factory=dict)
    schema: str = RESULT_SCHEMA

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "problem": self.problem,
            "scale": self.scale,
            "characters": self.characters,
            "p_s": self.p_s,
            "p_ss": self.p_ss,
            "p_ps": self.p_ps,
            "stats": self.stats,
            "refinement_drops": self.refinement_drops,
        }

    def dumps(self, exclude_times: bool = False) -> str:
        d = self.to_dict()
        if exclude_times:
            d["stats"] = {k: v for k, v in d["stats"].items() if k != "seconds"}
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ResultDocument":
        schema = d.get("schema")
        if schema != RESULT_SCHEMA:
            raise SchemaError(f"unsupported result schema {schema!r}")
        try:
            return cls(
                problem=d["problem"],
                scale=d["scale"],
                characters=d["characters"],
                p_s=d.get("p_s"),
                p_ss=d.get("p_ss"),
                p_ps=d.get("p_ps"),
                stats=d.get("stats", {}),
                refinement_drops=d.get("refinement_drops", {}),
                schema=schema,
            )
        except KeyError as exc:
            raise SchemaError(f"result document is missing {exc.args[0]!r}") from None

    @classmethod
    def loads(cls, text: str) -> "ResultDocument":
        return cls.from_dict(json.loads(text))

    def counts(self) -> tuple:
        s = self.stats
        return (s.get("xi"), s.get("a3"), s.get("b2"), s.get("p_s"), s.get("p_ss"), s.get("p_ps"))

    def states(self, key: str) -> list[list[tuple[Fraction, ...]]]:
        """Character lists of one section, in external coordinates as fractions."""
        section = getattr(self, key) or []
        return [[tuple(decode_number(x) for x in c) for c in entry["characters"]] for entry in section]


def load_result(path: str) -> ResultDocument:
    with open(path) as fh:
        return ResultDocument.loads(fh.read())


def _external(problem: Problem, chi) -> list:
    return [encode_number(x) for x in problem.external_of(chi)]


def _state_entry(problem: Problem, st: State, with_dim: bool = False) -> dict:
    entry = {
        "witness": None if st.witness is None else list(st.witness),
        "characters": sorted(_external(problem, c) for c in st.characters),
    }
    if with_dim:
        entry["dimension"] = span_dim(st.characters)
    return entry


def build_problem(spec: ProblemSpec) -> Problem:
    data = build(RootSystemSpec(spec.family, spec.rank))
    ws = evaluate(parse_rep_expr(spec.rep), data)
    if not ws.weights:
        raise DomainError("the representation has no weights")
    if len(ws.weights) > spec.max_characters:
        raise SizeCapError(f"{len(ws.weights)} characters exceed the cap of {spec.max_characters}")
    return Problem.from_weights(data, ws, fallback=spec.fallback)


def _check_subset_cap(spec: ProblemSpec, problem: Problem):
    from .core import essential_semistable, essential_stable

    d = problem.effective_rank
    worst = 0
    if {"stable", "superset-stream"} & set(spec.tasks):
        worst = max(worst, comb(len(essential_stable(problem)), max(d - 1, 0)))
    if "semistable" in spec.tasks:
        worst = max(worst, comb(len(essential_semistable(problem)), d))
    if worst > spec.max_subsets:
        raise SizeCapError(f"{worst} subsets to enumerate exceed the cap of {spec.max_subsets}")


def _phase_checkpoint(spec: ProblemSpec, phase: str) -> str | None:
    return f"{spec.checkpoint}.{phase}" if spec.checkpoint else None


def run(spec: ProblemSpec) -> ResultDocument:
    """Execute the requested tasks and assemble the result document."""
    problem = build_problem(spec)
    _check_subset_cap(spec, problem)
    options = spec.options()
    if spec.checkpoint:
        with open(f"{spec.checkpoint}.spec.json", "w") as fh:
            json.dump(spec.to_dict(), fh, indent=2, sort_keys=True)
    stats: dict = {"xi": len(problem), "seconds": {}}
    drops: dict = {}
    doc = ResultDocument(
        problem=spec.echo(),
        scale={"half_integral": problem.half_scale, "type_a_projection": problem.projection_scale},
        characters=[_external(problem, c) for c in problem.chars],
    )
    p_s_states = None
    if "stable" in spec.tasks:
        ph = stable_max_states(problem, options, checkpoint=_phase_checkpoint(spec, "stable"))
        p_s_states = ph.states
        stats["a3"] = len(ph.essential)
        stats["p_s"] = len(ph.states)
        stats["seconds"]["stable"] = round(ph.seconds, 6)
        drops["stable"] = ph.dropped
        doc.p_s = [_state_entry(problem, s) for s in ph.states]
    if "semistable" in spec.tasks:
        ph = semistable_max_states(problem, options, checkpoint=_phase_checkpoint(spec, "semistable"))
        stats["b2"] = len(ph.essential)
        stats["p_ss"] = len(ph.states)
        stats["seconds"]["semistable"] = round(ph.seconds, 6)
        drops["semistable"] = ph.dropped
        doc.p_ss = [_state_entry(problem, s) for s in ph.states]
    if "polystable" in spec.tasks:
        t0 = time.perf_counter()
        strata, before = polystable_strata(problem, p_s_states)
        stats["p_ps"] = len(strata)
        stats["p_ps_before_dedup"] = before
        stats["seconds"]["polystable"] = round(time.perf_counter() - t0, 6)
        doc.p_ps = [_state_entry(problem, s, with_dim=True) for s in strata]
    if "superset-stream" in spec.tasks:
        stats["stream_records"] = write_stream(spec, problem, options)
    doc.stats = stats
    doc.refinement_drops = drops
    if spec.output:
        with open(spec.output, "w") as fh:
            fh.write(doc.dumps())
    return doc


def write_stream(spec: ProblemSpec, problem: Problem, options: Options) -> int:
    """Write the superset stream as newline-delimited JSON; returns the records written.

    The first line is a header listing the indexed characters; each record
    names its state by the hexadecimal bitmask over that index. When resuming
    from a checkpoint, records are appended.
    """
    ckpt = _phase_checkpoint(spec, "stream")
    resuming = bool(ckpt) and os.path.exists(ckpt) and os.path.exists(spec.stream)
    mode = "a" if resuming else "w"
    with open(spec.stream, mode) as fh:
        if not resuming:
            header = {
                "schema": STREAM_SCHEMA,
                "problem": spec.echo(),
                "characters": [_external(problem, c) for c in problem.chars],
            }
            fh.write(json.dumps(header, sort_keys=True) + "\n")

        def sink(rec):
            out = {"rank": rec["rank"], "subset": rec["subset"], "witness": rec["witness"], "state": format(rec["mask"], "x")}
            fh.write(json.dumps(out, sort_keys=True) + "\n")

        return superset_stream(
            problem, sink, options, checkpoint=ckpt, dedupe=spec.stream_dedupe, on_chunk=lambda _: fh.flush()
        )


def read_stream(path: str):
    """Return ``(header, records)`` of a stream file; refuses unknown schemas."""
    with open(path) as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if not lines or lines[0].get("schema") != STREAM_SCHEMA:
        raise SchemaError(f"{path} is not a {STREAM_SCHEMA} file")
    return lines[0], lines[1:]


# -- rendering ----------------------------------------------------------------


def _is_degree_form(rep: str, family: str) -> bool:
    if family != "A":
        return False
    expr = parse_rep_expr(rep)
    return isinstance(expr, Irrep) and all(a == 0 for a in expr.highest_weight[1:])


def monomial(exponents) -> str:
    parts = []
    for i, e in enumerate(exponents):
        e = decode_number(e)
        if e.denominator != 1 or e < 0:
            raise DomainError(f"{list(exponents)} is not an exponent vector")
        if e == 0:
            continue
        parts.append(f"X{i}" if e == 1 else f"X{i}^{e}")
    return "*".join(parts) if parts else "1"


def render_monomials(doc: ResultDocument) -> str:
    """Each state as a list of monomials; only for forms of one degree in type A."""
    prob = doc.problem
    if not _is_degree_form(prob["rep"], prob["family"]):
        raise DomainError(f"monomial rendering needs a type A irrep(d,0,...,0), got {prob['family']} {prob['rep']}")
    out = []
    titles = (("p_s", "maximal non-stable states"), ("p_ss", "maximal unstable states"), ("p_ps", "polystable strata"))
    for key, title in titles:
        section = getattr(doc, key)
        if section is None:
            continue
        out.append(f"# {title} ({len(section)})")
        for entry in section:
            label = "" if entry.get("witness") is None else "lambda=(" + ",".join(map(str, entry["witness"])) + ") "
            if "dimension" in entry:
                label += f"dim={entry['dimension']} "
            out.append(label + ", ".join(monomial(c) for c in entry["characters"]))
    return "\n".join(out) + "\n"


# -- statistics table ---------------------------------------------------------

STATS_COLUMNS = ("description", "type", "rep", "t_s", "t_ss", "t_ps", "xi", "a3", "b2", "p_s", "p_ss", "p_ps")


def stats_rows(docs) -> list[list[str]]:
    rows = []
    for doc in docs:
        p = doc.problem
        s = doc.stats
        sec = s.get("seconds", {})

        def fmt(v):
            return "---" if v is None else str(v)

        def t(key):
            return "---" if key not in sec else f"{sec[key]:.3f}"

        rows.append([
            p.get("description", ""),
            f"{p['family']}{p['rank']}",
            p["rep"],
            t("stable"),
            t("semistable"),
            t("polystable"),
            *(fmt(v) for v in doc.counts()),
        ])
    return rows


def emit_stats_table(docs, delimiter: str | None = None) -> str:
    """Statistics as an aligned table, or delimited text when ``delimiter`` is given."""
    rows = stats_rows(docs)
    if delimiter is not None:
        buf = _io.StringIO()
        w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
        w.writerow(STATS_COLUMNS)
        w.writerows(rows)
        return buf.getvalue()
    table = [list(STATS_COLUMNS)] + rows
    widths = [max(len(r[i]) for r in table) for i in range(len(STATS_COLUMNS))]
    lines = []
    for r in table:
        cells = [c.ljust(w) if i < 3 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"
