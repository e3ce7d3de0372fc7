"""Checkable claims about plane graphs with minimum degree five, and corpus reports.

Each :class:`ClaimSpec` pairs preconditions (forbidden degrees, forbidden
cyclic stars, 3-connectivity, a lower bound on the maximum degree) with a
conclusion. A graph that fails a precondition makes the claim *vacuous* for
that graph; vacuous results are counted separately from passes.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import discharge as dis
from .planegraph import PlaneGraph, is_three_connected, is_triangulation
from .starmatch import (
    THEOREM1,
    THEOREM2,
    CyclicPattern,
    StarMatch,
    UnorderedPattern,
    find_listed_star,
    has_cyclic_star,
    has_minor_unordered_star,
    listed_star_centers,
    min_weight_minor_star,
    minor_star_profiles,
    parse_pattern,
)

REPORT_SCHEMA = "minorstars.report/1"


def _cyc(text: str) -> CyclicPattern:
    p = parse_pattern(text)
    assert isinstance(p, CyclicPattern)
    return p


def _unord(text: str) -> UnorderedPattern:
    p = parse_pattern(text)
    assert isinstance(p, UnorderedPattern)
    return p


# -- conclusions -------------------------------------------------------------

@dataclass(frozen=True)
class ListedStar:
    patterns: tuple[CyclicPattern, ...]

    def evaluate(self, g: PlaneGraph) -> tuple[bool, str]:
        m = find_listed_star(g, self.patterns)
        if m is None:
            return False, f"no listed star: scanned {g.degrees.count(5)} 5-vertices x {len(self.patterns)} patterns x 10 alignments"
        return True, m.describe()

    def describe(self) -> str:
        return "contains one of " + ", ".join(str(p) for p in self.patterns)


@dataclass(frozen=True)
class WeightBound:
    """Some minor k-star has weight <= delta_coeff * max_degree + const."""

    k: int
    const: int
    delta_coeff: int = 0

    def evaluate(self, g: PlaneGraph) -> tuple[bool, str]:
        bound = self.delta_coeff * g.max_degree + self.const
        w = min_weight_minor_star(g, self.k)
        if w is None:
            return False, f"no minor {self.k}-star at all"
        return w <= bound, f"lightest minor {self.k}-star weight {w} vs bound {bound}"

    def describe(self) -> str:
        rhs = f"Delta + {self.const}" if self.delta_coeff else str(self.const)
        return f"minor {self.k}-star of weight <= {rhs}"


@dataclass(frozen=True)
class StarBounds:
    """Minor 5-star bounds on weight and height, by one star (joint) or separately."""

    weight: int
    height: int
    joint: bool

    def evaluate(self, g: PlaneGraph) -> tuple[bool, str]:
        prof = minor_star_profiles(g, 5)
        if not prof:
            return False, "no minor 5-star at all"
        if self.joint:
            for v, w, h in prof:
                if w <= self.weight and h <= self.height:
                    return True, f"vertex {v + 1}: weight {w}, height {h}"
            return False, (f"none of {len(prof)} minor 5-stars has weight <= {self.weight} "
                           f"and height <= {self.height}")
        w = min(p[1] for p in prof)
        h = min(p[2] for p in prof)
        ok = w <= self.weight and h <= self.height
        return ok, f"lightest weight {w} (<= {self.weight}), lowest height {h} (<= {self.height})"

    def describe(self) -> str:
        link = "and" if self.joint else "; a minor 5-star of"
        return f"minor 5-star of weight <= {self.weight} {link} height <= {self.height}"


@dataclass(frozen=True)
class AnyUnordered:
    patterns: tuple[UnorderedPattern, ...]

    def evaluate(self, g: PlaneGraph) -> tuple[bool, str]:
        for p in self.patterns:
            v = has_minor_unordered_star(g, p)
            if v is not None:
                return True, f"minor {p}-star at vertex {v + 1}"
        return False, f"no minor center carries any of {', '.join(map(str, self.patterns))}"

    def describe(self) -> str:
        return "minor " + " or ".join(f"{p}-star" for p in self.patterns)


Conclusion = ListedStar | WeightBound | StarBounds | AnyUnordered


@dataclass(frozen=True)
class Preconditions:
    forbidden_degrees: frozenset[int] = frozenset()
    forbidden_patterns: tuple[CyclicPattern, ...] = ()
    requires_3connected: bool = False
    min_max_degree: int | None = None


@dataclass(frozen=True)
class ClaimSpec:
    id: str
    statement: str
    conclusion: Conclusion
    pre: Preconditions = Preconditions()


@dataclass(frozen=True)
class ClaimResult:
    claim: str
    status: str  # "holds" | "vacuous" | "counterexample"
    detail: str


def _range(a: int, b: int) -> frozenset[int]:
    return frozenset(range(a, b + 1))


STAR_5665 = _cyc("<5,6,6,5,*>")
STAR_5555 = _cyc("<5,5,5,5,*>")

CLAIMS: tuple[ClaimSpec, ...] = (
    ClaimSpec("MR1", "first list of minor 5-stars", ListedStar(THEOREM1)),
    ClaimSpec("MR2", "second list of minor 5-stars", ListedStar(THEOREM2)),
    ClaimSpec("T2", "3-polytope, Delta >= 13: minor 5-star of weight <= Delta + 29",
              WeightBound(5, 29, 1), Preconditions(requires_3connected=True, min_max_degree=13)),
    ClaimSpec("T3", "minor 4-star of weight <= 30", WeightBound(4, 30)),
    ClaimSpec("T4", "minor (10,10,10,10)-star", AnyUnordered((_unord("(10,10,10,10)"),))),
    ClaimSpec("T5", "minor (5,6,7)-star or minor (6,6,6)-star",
              AnyUnordered((_unord("(5,6,7)"), _unord("(6,6,6)")))),
    ClaimSpec("T6", "(6,5,6)-path", AnyUnordered((_unord("(6,6)"),))),
    ClaimSpec("T7", "(5,6)-edge", AnyUnordered((_unord("(6)"),))),
    ClaimSpec("NO78", "no 7- or 8-vertices: one of seven listed stars",
              ListedStar(tuple(map(_cyc, ["<5,6,6,5,*>", "<5,6,6,6,17>", "<6,6,6,6,11>", "<5,6,9,5,10>",
                                          "<5,6,11,5,9>", "<5,5,10,5,12>", "<5,5,9,5,17>"]))),
              Preconditions(forbidden_degrees=_range(7, 8))),
    ClaimSpec("NO79", "no vertices of degree 7..9: one of four listed stars",
              ListedStar(tuple(map(_cyc, ["<5,6,6,5,*>", "<5,6,6,6,17>", "<6,6,6,6,11>", "<5,5,10,5,12>"]))),
              Preconditions(forbidden_degrees=_range(7, 9))),
    ClaimSpec("NO711", "no vertices of degree 7..11: one of three listed stars",
              ListedStar(tuple(map(_cyc, ["<5,6,6,5,*>", "<5,6,6,6,17>", "<6,6,6,6,6>"]))),
              Preconditions(forbidden_degrees=_range(7, 11))),
    # the source prints this hypothesis with angle brackets; read as a cyclic pattern
    ClaimSpec("NO6", "3-polytope, no degrees 6..9, no <5,5,5,5,*>-star: weight <= 42; height <= 12",
              StarBounds(42, 12, joint=False),
              Preconditions(forbidden_degrees=_range(6, 9), forbidden_patterns=(STAR_5555,),
                            requires_3connected=True)),
    ClaimSpec("WH", "no <5,6,6,5,*>-star: minor 5-star of weight <= 51 and height <= 23",
              StarBounds(51, 23, joint=True), Preconditions(forbidden_patterns=(STAR_5665,))),
    ClaimSpec("MR2-D28", "Delta >= 16: minor 5-star of weight <= Delta + 28",
              WeightBound(5, 28, 1), Preconditions(min_max_degree=16)),
    ClaimSpec("MR2-W45", "no <5,6,6,5,*>, no <5,6,7,5,23>: weight <= 45 and height <= 17",
              StarBounds(45, 17, joint=True),
              Preconditions(forbidden_patterns=(STAR_5665, _cyc("<5,6,7,5,23>")))),
    ClaimSpec("MR2-W44", "no <5,5,5,5,*>, no 6- or 7-vertices: weight <= 44 and height <= 15",
              StarBounds(44, 15, joint=True),
              Preconditions(forbidden_degrees=_range(6, 7), forbidden_patterns=(STAR_5555,))),
)

CLAIMS_BY_ID = {c.id: c for c in CLAIMS}

# T3..T7 follow from either list; checked per graph as a consistency assertion
COROLLARIES_OF_LISTS = ("T3", "T4", "T5", "T6", "T7")

# stars named in the case analysis but absent from the printed lists
PROOF_CITED = {
    "thm1": tuple(map(_cyc, ["<5,6,7,8,6>", "<7,5,5,14,6>", "<8,5,5,5,11>", "<5,5,8,5,15>"])),
    "thm2": (_cyc("<5,5,7,5,23>"),),
}
THEOREM_LISTS = {"thm1": THEOREM1, "thm2": THEOREM2}


def select_claims(spec: str) -> tuple[ClaimSpec, ...]:
    if spec == "all":
        return CLAIMS
    ids = [s.strip() for s in spec.split(",") if s.strip()]
    unknown = [i for i in ids if i not in CLAIMS_BY_ID]
    if unknown:
        raise ValueError(f"unknown claim id(s): {', '.join(unknown)}; known: {', '.join(CLAIMS_BY_ID)}")
    return tuple(CLAIMS_BY_ID[i] for i in ids)


def three_connected(g: PlaneGraph) -> bool:
    # simple triangulations on >= 4 vertices are 3-connected
    if g.n >= 4 and is_triangulation(g):
        return True
    return is_three_connected(g)


def precondition_failure(g: PlaneGraph, pre: Preconditions) -> str | None:
    bad = sorted(pre.forbidden_degrees.intersection(g.degrees))
    if bad:
        return f"has vertices of forbidden degree {bad}"
    if pre.min_max_degree is not None and g.max_degree < pre.min_max_degree:
        return f"maximum degree {g.max_degree} < {pre.min_max_degree}"
    for p in pre.forbidden_patterns:
        if has_cyclic_star(g, p):
            return f"contains a {p}-star"
    if pre.requires_3connected and not three_connected(g):
        return "not 3-connected"
    return None


def check_claim(g: PlaneGraph, claim: ClaimSpec) -> ClaimResult:
    if g.min_degree < 5:
        raise ValueError(f"minimum degree is {g.min_degree}, expected at least 5")
    why = precondition_failure(g, claim.pre)
    if why is not None:
        return ClaimResult(claim.id, "vacuous", why)
    ok, detail = claim.conclusion.evaluate(g)
    return ClaimResult(claim.id, "holds" if ok else "counterexample", detail)


# -- per-graph evaluation ------------------------------------------------------

@dataclass
class DischargeStats:
    conservation: bool
    balance: bool
    sound: bool
    negatives: int
    localized: int
    remark_violations: list[str]
    ledger_size: int


@dataclass
class GraphOutcome:
    ident: str
    n: int = 0
    max_degree: int = 0
    min_weight5: int | None = None
    results: dict[str, ClaimResult] = field(default_factory=dict)
    discharge: dict[str, DischargeStats] = field(default_factory=dict)
    proof_cited_only: list[str] = field(default_factory=list)
    consistency: list[str] = field(default_factory=list)
    error: str | None = None


def remark_violations(g: PlaneGraph, result: dis.DischargeResult) -> list[str]:
    """Hub-attributed flows that disagree with the per-hub totals of the relay rule."""
    from .starmatch import NeighborClass, classify_neighbor

    F = Fraction
    if result.rule_set == "thm1":
        hubs = (10, 11)
        strong, twice, other, cap = F(4, 5), F(2, 5), F(1, 2), F(2, 5)
    else:
        hubs = (9,)
        strong, twice, other, cap = F(2, 3), F(1, 3), F(5, 12), F(1, 3)
    out = []
    for w in range(g.n):
        k = g.degree(w)
        if k not in hubs:
            continue
        for i, u in enumerate(g.rotation[w]):
            flags = classify_neighbor(g, w, i)
            if not flags:
                relayed = dis.relayed_by(result, u, w)
                if relayed > cap:
                    out.append(f"relay {u + 1} passes {relayed} > {cap} for hub {w + 1}")
                continue
            got = dis.flow_to(result, u, hub=w)
            if NeighborClass.STRONG in flags:
                if got != strong:
                    out.append(f"strong 5-neighbor {u + 1} of {k}-vertex {w + 1} gets {got}, expected {strong}")
            elif NeighborClass.TWICE_WEAK in flags:
                # the 11-vertex also adds R4 to twice-weak neighbours
                expected = twice + (F(1, 10) if k == 11 else 0)
                if got != expected:
                    out.append(f"twice-weak 5-neighbor {u + 1} of {k}-vertex {w + 1} gets {got}, expected {expected}")
            elif got < other:
                out.append(f"5-neighbor {u + 1} of {k}-vertex {w + 1} gets {got} < {other}")
    return out


def _discharge_stats(g: PlaneGraph, rule_set: str, centers: set[int]) -> DischargeStats:
    result = dis.apply_rules(g, rule_set)
    neg = dis.negative_vertices(result)
    localized = 0
    for v, _ in neg:
        if v in centers or any(u in centers for u in g.rotation[v]):
            localized += 1
    return DischargeStats(
        conservation=result.total == -12,
        balance=result.check_balance(),
        sound=not neg or bool(centers),
        negatives=len(neg),
        localized=localized,
        remark_violations=remark_violations(g, result),
        ledger_size=len(result.ledger),
    )


def evaluate_graph(ident: str, g: PlaneGraph, claims: Sequence[ClaimSpec], *, run_discharge: bool = True) -> GraphOutcome:
    out = GraphOutcome(ident, g.n, g.max_degree)
    if g.min_degree < 5:
        out.error = f"{ident}: minimum degree is {g.min_degree}, expected at least 5"
        return out
    out.min_weight5 = min_weight_minor_star(g, 5)
    for c in claims:
        out.results[c.id] = check_claim(g, c)
    for list_id in ("MR1", "MR2"):
        r = out.results.get(list_id)
        if r is None or r.status != "holds":
            continue
        for t in COROLLARIES_OF_LISTS:
            rt = out.results.get(t)
            if rt is not None and rt.status == "counterexample":
                out.consistency.append(f"{list_id} holds but {t} fails")
    tri = is_triangulation(g)
    for rs, patterns in THEOREM_LISTS.items():
        centers = listed_star_centers(g, patterns)
        if not centers and any(has_cyclic_star(g, p) for p in PROOF_CITED[rs]):
            out.proof_cited_only.append(rs)
        if run_discharge and tri:
            out.discharge[rs] = _discharge_stats(g, rs, centers)
    return out


# -- report ----------------------------------------------------------------------

@dataclass
class Report:
    claims: Sequence[ClaimSpec]
    header: dict = field(default_factory=dict)
    graphs: int = 0
    errors: list[str] = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    omega: dict = field(default_factory=dict)
    discharge: dict = field(default_factory=dict)
    consistency: list[str] = field(default_factory=list)
    proof_cited_only: list[str] = field(default_factory=list)

    def __post_init__(self):
        for c in self.claims:
            self.counts.setdefault(c.id, {"evaluated": 0, "holds": 0, "vacuous": 0, "failed": 0,
                                          "witnesses": []})
        for rs in dis.RULE_SETS:
            self.discharge.setdefault(rs, {
                "graphs": 0, "conservation_failures": [], "balance_failures": [],
                "soundness_failures": [], "remark_failures": [], "negative_vertices": 0,
                "localized_negative_vertices": 0, "transfers": 0})

    def add(self, o: GraphOutcome) -> None:
        if o.error is not None:
            self.errors.append(o.error)
            return
        self.graphs += 1
        for cid, r in o.results.items():
            row = self.counts[cid]
            if r.status == "vacuous":
                row["vacuous"] += 1
                continue
            row["evaluated"] += 1
            if r.status == "holds":
                row["holds"] += 1
            else:
                row["failed"] += 1
                row["witnesses"].append({"graph": o.ident, "attestation": r.detail})
        if o.min_weight5 is not None:
            cell = self.omega.setdefault(o.max_degree, {"graphs": 0, "omega": 0, "lightest": None})
            cell["graphs"] += 1
            cell["omega"] = max(cell["omega"], o.min_weight5)
            cell["lightest"] = o.min_weight5 if cell["lightest"] is None else min(cell["lightest"], o.min_weight5)
        for rs, st in o.discharge.items():
            d = self.discharge[rs]
            d["graphs"] += 1
            d["negative_vertices"] += st.negatives
            d["localized_negative_vertices"] += st.localized
            d["transfers"] += st.ledger_size
            if not st.conservation:
                d["conservation_failures"].append(o.ident)
            if not st.balance:
                d["balance_failures"].append(o.ident)
            if not st.sound:
                d["soundness_failures"].append(o.ident)
            d["remark_failures"].extend(f"{o.ident}: {m}" for m in st.remark_violations)
        self.consistency.extend(f"{o.ident}: {m}" for m in o.consistency)
        self.proof_cited_only.extend(f"{o.ident}: {rs}" for rs in o.proof_cited_only)

    @property
    def failed(self) -> bool:
        if any(row["failed"] for row in self.counts.values()):
            return True
        if self.consistency:
            return True
        return any(d["conservation_failures"] or d["balance_failures"] or d["soundness_failures"]
                   or d["remark_failures"] for d in self.discharge.values())

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "header": self.header,
            "graphs": self.graphs,
            "errors": self.errors,
            "claims": {c.id: {"statement": c.statement, **self.counts[c.id]} for c in self.claims},
            "omega": {str(k): self.omega[k] for k in sorted(self.omega)},
            "discharge": self.discharge,
            "consistency_failures": self.consistency,
            "proof_cited_only": self.proof_cited_only,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"# {REPORT_SCHEMA}"]
        for k, v in sorted(self.header.items()):
            lines.append(f"# {k}: {v}")
        lines.append(f"graphs: {self.graphs}  input errors: {len(self.errors)}")
        lines += [f"error: {e}" for e in self.errors]
        lines.append("claim      evaluated  holds  vacuous  failed")
        for c in self.claims:
            row = self.counts[c.id]
            lines.append(f"{c.id:<10} {row['evaluated']:>9}  {row['holds']:>5}  {row['vacuous']:>7}  {row['failed']:>6}")
            for ce in row["witnesses"]:
                lines.append(f"  counterexample {ce['graph']}: {ce['attestation']}")
        lines.append("omega (per max degree: graphs, max over graphs of lightest minor 5-star)")
        for k in sorted(self.omega):
            cell = self.omega[k]
            lines.append(f"  Delta={k:<3} graphs={cell['graphs']:<5} omega>={cell['omega']}")
        for rs, d in self.discharge.items():
            lines.append(
                f"discharge {rs}: graphs={d['graphs']} transfers={d['transfers']} "
                f"conservation_failures={len(d['conservation_failures'])} "
                f"soundness_failures={len(d['soundness_failures'])} "
                f"remark_failures={len(d['remark_failures'])} "
                f"negative={d['negative_vertices']} localized={d['localized_negative_vertices']}")
            for key in ("conservation_failures", "balance_failures", "soundness_failures", "remark_failures"):
                lines += [f"  {key[:-1]}: {x}" for x in d[key]]
        lines += [f"consistency failure: {m}" for m in self.consistency]
        lines += [f"only proof-cited star: {m}" for m in self.proof_cited_only]
        lines.append("result: " + ("COUNTEREXAMPLE" if self.failed else "all claims hold"))
        return "\n".join(lines) + "\n"


def run_corpus(items: Iterable[tuple[str, PlaneGraph]], claims: Sequence[ClaimSpec] = CLAIMS,
               header: dict | None = None) -> Report:
    report = Report(claims, header=dict(header or {}))
    for ident, g in items:
        report.add(evaluate_graph(ident, g, claims))
    return report
