"""Command-line front end.

Exit codes: 0 success, 1 counterexample (report still written), 2 input or
usage error. Vertices and graphs are numbered from 1 in all output.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Iterable, Iterator, Sequence

from . import __version__
from .discharge import RULE_SETS, apply_rules, negative_vertices
from .formats import GraphFormatError, GraphRecord, encode_planar_code, encode_text_many, read_records
from .generate import RNG_ALGORITHM, Corpus, GenConfig
from .planegraph import PlaneGraph, is_triangulation
from .starmatch import PatternError, find_listed_star, load_pattern_list
from .verify import GraphOutcome, Report, evaluate_graph, select_claims

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad input detected after argument parsing; exits with code 2."""


def _frac(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parallel_map(fn: Callable, items: Iterable, jobs: int) -> Iterator:
    if jobs <= 1:
        yield from map(fn, items)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(fn, items, chunksize=8)


def _records(paths: Sequence[str]) -> Iterator[GraphRecord]:
    for path in paths:
        try:
            yield from read_records(path)
        except OSError as exc:
            raise InputError(f"{path}: {exc.strerror or exc}") from None
        except UnicodeDecodeError as exc:
            raise InputError(f"{path}: not ASCII text: {exc.reason}") from None


# -- per-graph workers (module level so they pickle) -----------------------------

def _validate_one(rec: GraphRecord) -> dict:
    if rec.error is not None:
        return {"graph": rec.ident, "error": str(rec.error)}
    g = rec.graph
    return {"graph": rec.ident, "n": g.n, "edges": g.num_edges, "faces": g.num_faces,
            "triangulation": is_triangulation(g), "min_degree": g.min_degree, "max_degree": g.max_degree}


def _stars_one(patterns, rec: GraphRecord) -> dict:
    if rec.error is not None:
        return {"graph": rec.ident, "error": str(rec.error)}
    try:
        m = find_listed_star(rec.graph, patterns)
    except ValueError as exc:
        return {"graph": rec.ident, "error": f"{rec.ident}: {exc}"}
    if m is None:
        return {"graph": rec.ident, "match": None}
    return {"graph": rec.ident, "match": {
        "pattern": str(m.pattern), "list_index": m.list_index, "center": m.center + 1,
        "leaves": [v + 1 for v in m.leaves], "orientation": m.orientation, "offset": m.offset,
        "weight": m.weight, "height": m.height, "text": m.describe()}}


def _discharge_one(rule_set: str, ledger: bool, rec: GraphRecord) -> dict:
    if rec.error is not None:
        return {"graph": rec.ident, "error": str(rec.error)}
    try:
        res = apply_rules(rec.graph, rule_set)
    except ValueError as exc:
        return {"graph": rec.ident, "error": f"{rec.ident}: {exc}"}
    out = {"graph": rec.ident, "rules": rule_set, "transfers": len(res.ledger), "total": _frac(res.total),
           "conserved": res.total == -12 and res.check_balance(),
           "negative": [[v + 1, _frac(c)] for v, c in negative_vertices(res)],
           "final": [_frac(c) for c in res.final]}
    if ledger:
        out["ledger"] = [t.format() for t in res.ledger]
    return out


def _verify_one(claim_ids: str, item: tuple[str, PlaneGraph | None, str | None]):
    ident, g, err = item
    if err is not None:
        return GraphOutcome(ident, error=err)
    return evaluate_graph(ident, g, select_claims(claim_ids))


# -- commands ----------------------------------------------------------------------

def _emit(args, text: str) -> None:
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_validate(args) -> int:
    rows = list(_parallel_map(_validate_one, _records(args.files), args.jobs))
    if args.json:
        _emit(args, _dump(rows))
    else:
        lines = []
        for r in rows:
            if "error" in r:
                lines.append(f"error: {r['error']}")
            else:
                lines.append(f"{r['graph']}: ok n={r['n']} edges={r['edges']} faces={r['faces']} "
                             f"triangulation={'yes' if r['triangulation'] else 'no'} "
                             f"degrees={r['min_degree']}..{r['max_degree']}")
        _emit(args, "".join(line + "\n" for line in lines))
    return EXIT_INPUT if any("error" in r for r in rows) else EXIT_OK


def cmd_stars(args) -> int:
    try:
        patterns = load_pattern_list(args.list)
    except (OSError, PatternError) as exc:
        raise InputError(f"{args.list}: {exc}") from None
    rows = list(_parallel_map(partial(_stars_one, patterns), _records(args.files), args.jobs))
    if args.json:
        _emit(args, _dump(rows))
    else:
        lines = []
        for r in rows:
            if "error" in r:
                lines.append(f"error: {r['error']}")
            elif r["match"] is None:
                lines.append(f"{r['graph']}: no listed star (counterexample)")
            else:
                lines.append(f"{r['graph']}: {r['match']['text']}")
        _emit(args, "".join(line + "\n" for line in lines))
    if any("error" in r for r in rows):
        return EXIT_INPUT
    return EXIT_COUNTEREXAMPLE if any(r["match"] is None for r in rows) else EXIT_OK


def cmd_discharge(args) -> int:
    fn = partial(_discharge_one, args.rules, args.ledger)
    rows = list(_parallel_map(fn, _records(args.files), args.jobs))
    if args.json:
        _emit(args, _dump(rows))
    else:
        lines = []
        for r in rows:
            if "error" in r:
                lines.append(f"error: {r['error']}")
                continue
            lines.append(f"{r['graph']}: rules {r['rules']} transfers {r['transfers']} total {r['total']} "
                         f"negative {len(r['negative'])}")
            lines.append("final: " + " ".join(r["final"]))
            if args.ledger:
                lines += r["ledger"]
        _emit(args, "".join(line + "\n" for line in lines))
    if any("error" in r for r in rows):
        return EXIT_INPUT
    return EXIT_OK if all(r["conserved"] for r in rows) else EXIT_COUNTEREXAMPLE


def _gen_config(args) -> GenConfig:
    try:
        return GenConfig(seed=args.seed, count=args.count, min_n=args.min_n, max_n=args.max_n,
                         flip_fraction=args.flip_fraction)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _gen_header(cfg: GenConfig, stuck: int) -> dict:
    return {"rng": RNG_ALGORITHM, "seed": cfg.seed, "count": cfg.count, "min_n": cfg.min_n,
            "max_n": cfg.max_n, "flip_fraction": cfg.flip_fraction, "stuck_walks": stuck}


def cmd_generate(args) -> int:
    cfg = _gen_config(args)
    corpus = Corpus(cfg)
    graphs = list(corpus)
    if args.text:
        _emit(args, encode_text_many(graphs))
    else:
        if not args.output or args.output == "-":
            raise InputError("generate writes binary planar_code; pass -o FILE or --text")
        with open(args.output, "wb") as fh:
            fh.write(encode_planar_code(graphs))
    summary = dict(_gen_header(cfg, corpus.stuck), written=len(graphs))
    sys.stderr.write(" ".join(f"{k}={v}" for k, v in sorted(summary.items())) + "\n")
    return EXIT_OK


def _verify_items(args, header: dict) -> Iterator[tuple[str, PlaneGraph | None, str | None]]:
    if args.files:
        header["inputs"] = list(args.files)
        for rec in _records(args.files):
            yield rec.ident, rec.graph, None if rec.error is None else str(rec.error)
        return
    cfg = _gen_config(args)
    corpus = Corpus(cfg)
    header.update(_gen_header(cfg, 0))
    for i, g in enumerate(corpus, 1):
        yield f"seed{cfg.seed}#{i}", g, None
    header["stuck_walks"] = corpus.stuck


def cmd_verify(args) -> int:
    try:
        claims = select_claims(args.claims)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    header: dict = {"claims": args.claims}
    report = Report(claims, header=header)
    for outcome in _parallel_map(partial(_verify_one, args.claims), _verify_items(args, header), args.jobs):
        report.add(outcome)
    _emit(args, report.to_json() if args.json else report.to_text())
    for e in report.errors:
        sys.stderr.write(f"error: {e}\n")
    if report.errors:
        return EXIT_INPUT
    return EXIT_COUNTEREXAMPLE if report.failed else EXIT_OK


# -- parser --------------------------------------------------------------------------

def _common(defaults: bool) -> argparse.ArgumentParser:
    # shared flags accepted before or after the subcommand
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=d(False), help="emit JSON")
    p.add_argument("-o", "--output", default=d(None), metavar="FILE", help="write output to FILE")
    p.add_argument("--jobs", type=int, default=d(1), metavar="K", help="worker processes (order preserved)")
    return p


def _gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--min-n", type=int, default=12)
    p.add_argument("--max-n", type=int, default=50)
    p.add_argument("--flip-fraction", type=float, default=0.5)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minorstars", parents=[_common(True)],
                                     description="Minor 5-stars, discharging and claim checks on plane graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(False)

    p = sub.add_parser("validate", parents=[common], help="parse and check embeddings")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stars", parents=[common], help="first listed star per graph")
    p.add_argument("files", nargs="+")
    p.add_argument("--list", default="thm1", metavar="thm1|thm2|FILE")
    p.set_defaults(func=cmd_stars)

    p = sub.add_parser("discharge", parents=[common], help="apply a rule set")
    p.add_argument("files", nargs="+")
    p.add_argument("--rules", choices=RULE_SETS, default="thm1")
    p.add_argument("--ledger", action="store_true", help="print every transfer")
    p.set_defaults(func=cmd_discharge)

    p = sub.add_parser("generate", parents=[common], help="seeded random triangulations")
    _gen_flags(p)
    p.add_argument("--text", action="store_true", help="write the text format instead of planar_code")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", parents=[common], help="check claims on files or a generated corpus")
    p.add_argument("files", nargs="*")
    p.add_argument("--claims", default="all", metavar="all|ID,ID...")
    _gen_flags(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        sys.stderr.write("error: --jobs must be at least 1\n")
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except GraphFormatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
