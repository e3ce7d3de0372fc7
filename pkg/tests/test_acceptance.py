"""Acceptance criteria 1-8 at full scale.

Each test records a PASS/FAIL line in the ``acceptance_log`` fixture; the
summary is printed at the end of the pytest run.
"""

from __future__ import annotations

import time
from fractions import Fraction

import numpy as np
import pytest

from minorstars.cli import main
from minorstars.discharge import RULE_SETS, apply_rules, flow_to
from minorstars.formats import encode_planar_code, parse_planar_code, read_records
from minorstars.generate import Corpus, GenConfig
from minorstars.starmatch import (
    INF,
    THEOREM1,
    THEOREM2,
    CyclicPattern,
    UnorderedPattern,
    find_listed_star,
    match_cyclic,
    match_unordered,
)
from minorstars.verify import CLAIMS, run_corpus

from conftest import CLOSURE_FILE
from malformed_cases import CASES
from oracles import _classes, cyclic_fits, local_config, unordered_fits

CORPUS = GenConfig(seed=1, count=5000, min_n=12, max_n=200)
CONFIGS = 100_000


def record(log, key, ok, detail):
    log[key] = (ok, detail)
    assert ok, detail


@pytest.fixture(scope="module")
def corpus_graphs():
    c = Corpus(CORPUS)
    graphs = list(c)
    assert len(graphs) == CORPUS.count and c.stuck == 0
    return graphs


@pytest.fixture(scope="module")
def everything(icosa, corpus_graphs, closure_graphs):
    """(ident, graph) for the icosahedron, the generated corpus and the closure file."""
    items = [("icosahedron", icosa)]
    items += [(f"seed1#{i}", g) for i, g in enumerate(corpus_graphs, 1)]
    items += [(f"{CLOSURE_FILE.name}#{i}", g) for i, g in enumerate(closure_graphs, 1)]
    return items


@pytest.fixture(scope="module")
def discharged(everything):
    return {rs: [apply_rules(g, rs) for _, g in everything] for rs in RULE_SETS}


@pytest.fixture(scope="module")
def report(everything):
    return run_corpus(everything, CLAIMS)


def test_1_every_graph_has_listed_stars(everything, acceptance_log):
    start = time.perf_counter()
    missing = [(ident, name) for ident, g in everything
               for name, lst in (("thm1", THEOREM1), ("thm2", THEOREM2))
               if find_listed_star(g, lst) is None]
    elapsed = time.perf_counter() - start
    detail = (f"{len(everything)} graphs, {len(missing)} without a listed star, "
              f"scan {elapsed:.1f}s (limit 60s)")
    record(acceptance_log, 1, not missing and elapsed < 60, detail)


def test_2_conservation(discharged, acceptance_log):
    bad = [(rs, i) for rs, results in discharged.items() for i, r in enumerate(results)
           if r.total != -12 or sum(r.final, Fraction(0)) != -12 or not r.check_balance()]
    n = len(next(iter(discharged.values())))
    record(acceptance_log, 2, not bad, f"{n} graphs x 2 rule sets, {len(bad)} failures")


def test_3_strong_neighbours_of_hubs(everything, discharged, acceptance_log):
    expect = {"thm1": ((10, 11), Fraction(4, 5)), "thm2": ((9,), Fraction(2, 3))}
    checked = {rs: 0 for rs in RULE_SETS}
    bad = []
    for rs, (hubs, amount) in expect.items():
        for (ident, g), res in zip(everything, discharged[rs]):
            for w in range(g.n):
                if g.degree(w) not in hubs:
                    continue
                for u in g.rotation[w]:
                    if "strong" not in _classes(g, w, u):
                        continue
                    checked[rs] += 1
                    got = flow_to(res, u, hub=w)
                    if got != amount:
                        bad.append(f"{ident} {rs}: hub {w + 1} -> {u + 1} gets {got}")
    ok = not bad and all(checked.values())
    detail = (f"strong 5-neighbours checked thm1={checked['thm1']} thm2={checked['thm2']}, "
              f"{len(bad)} failures")
    record(acceptance_log, 3, ok, detail)


def test_4_negative_charge_implies_listed_star(everything, report, acceptance_log):
    d = {rs: report.discharge[rs] for rs in RULE_SETS}
    bad = sum(len(x["soundness_failures"]) for x in d.values())
    graphs = min(x["graphs"] for x in d.values())
    stats = ", ".join(
        f"{rs} localized {x['localized_negative_vertices']}/{x['negative_vertices']}" for rs, x in d.items())
    remarks = sum(len(x["remark_failures"]) for x in d.values())
    record(acceptance_log, 4, bad == 0 and graphs == len(everything),
           f"{graphs} triangulations, {bad} failures; {stats}, "
           f"remark and relay-cap violations {remarks} (recorded only)")


def test_5_corollary_suite(report, acceptance_log):
    failed = {cid: row["failed"] for cid, row in report.counts.items() if row["failed"]}
    must_evaluate = ("MR1", "MR2", "T3", "T4", "T5", "T6", "T7", "T2", "MR2-D28")
    never = [cid for cid in must_evaluate if report.counts[cid]["evaluated"] == 0]
    summary = " ".join(f"{cid}={row['evaluated']}/{row['vacuous']}" for cid, row in report.counts.items())
    ok = not failed and not never and not report.consistency
    record(acceptance_log, 5, ok,
           f"counterexamples {failed or 0}, unexercised {never or 'none'}, "
           f"graphs with only a proof-cited star {len(report.proof_cited_only)}; evaluated/vacuous: {summary}")


def test_6_oracle_equivalence(acceptance_log):
    rng = np.random.default_rng(20240601)
    cyc_bad = 0
    for degs, raw in zip(rng.integers(5, 16, size=(CONFIGS, 5)), rng.integers(5, 18, size=(CONFIGS, 5))):
        degs = degs.tolist()
        bounds = tuple(INF if x > 15 else int(x) for x in raw)
        got = bool(match_cyclic(local_config(degs), 0, CyclicPattern(bounds)))
        cyc_bad += got != cyclic_fits(degs, bounds)
    unord_bad = 0
    ks = rng.integers(1, 6, size=CONFIGS)
    for k, degs, raw in zip(ks, rng.integers(5, 16, size=(CONFIGS, 5)), rng.integers(5, 18, size=(CONFIGS, 5))):
        degs = degs.tolist()
        bounds = tuple(INF if x > 15 else int(x) for x in raw[:k])
        got = match_unordered(local_config(degs), 0, UnorderedPattern(bounds))
        unord_bad += got != unordered_fits(degs, bounds)
    record(acceptance_log, 6, cyc_bad == 0 and unord_bad == 0,
           f"{CONFIGS} cyclic configurations ({cyc_bad} disagreements), "
           f"{CONFIGS} unordered configurations ({unord_bad} disagreements)")


def test_7_format_fidelity(everything, tmp_path, acceptance_log):
    graphs = [g for _, g in everything]
    data = encode_planar_code(graphs)
    round_trip = parse_planar_code(data) == graphs and encode_planar_code(parse_planar_code(data)) == data
    closure_ok = encode_planar_code(parse_planar_code(CLOSURE_FILE.read_bytes())) == CLOSURE_FILE.read_bytes()
    wrong = []
    for case in CASES:
        path = tmp_path / f"{case.name}.in"
        path.write_bytes(case.data)
        errs = [r.error for r in read_records(path) if r.error is not None]
        if not errs or case.reason not in errs[0].reason or \
                (errs[0].graph, errs[0].offset, errs[0].line) != (case.graph, case.offset, case.line):
            wrong.append(case.name)
    ok = round_trip and closure_ok and not wrong and len(CASES) == 20
    record(acceptance_log, 7, ok,
           f"{len(graphs)} graphs round-trip={round_trip}, closure file byte-identical={closure_ok}, "
           f"{len(CASES) - len(wrong)}/{len(CASES)} malformed files diagnosed")


def test_8_verify_is_deterministic(tmp_path, acceptance_log):
    outs = []
    for k in (1, 2):
        dest = tmp_path / f"run{k}.txt"
        code = main(["verify", "--seed", "1", "--claims", "all", "-o", str(dest)])
        outs.append((code, dest.read_bytes()))
    same = outs[0] == outs[1]
    record(acceptance_log, 8, same and outs[0][0] == 0,
           f"two runs byte-identical={same} ({len(outs[0][1])} bytes), exit {outs[0][0]}")
