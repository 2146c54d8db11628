"""Command-line driver: ``ramsey-spectrum <subcommand> ...``.

Exit codes: 0 success, 1 parse or usage error, 2 interval result or failed
validation, 3 oracle insufficient, 4 outside both construction regimes.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import constructions as cons
from .colouring import ColouringFormatError, EdgeColouring, parse_colouring, write_colouring
from .engine import SearchBudget, path_ramsey_edge_formula, path_ramsey_oracle, ramsey_number
from .extraction import (
    MonoEmbedding,
    StepFailure,
    extract_case1,
    extract_case2,
    is_mono_biclique,
    is_mono_clique,
    is_mono_path,
    trace_to_text,
)
from .graph import (
    Embedding,
    Graph,
    Graph6Error,
    complete_bipartite,
    cycle_graph,
    parse_graph6,
    path_graph,
    star_graph,
    write_graph6,
)
from .lower_bounds import r3_lower_bound, search_witness, verify_no_mono
from .spectrum import check_burr_erdos_floor, check_interval_inclusion, find_c_gaps, spectrum

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_ORACLE, EXIT_REGIME = 0, 1, 2, 3, 4

FAMILIES = ("path", "cycle", "clique", "star", "biclique", "double-star", "clique-path", "biclique-path")


class UsageError(Exception):
    pass


def _budget(args) -> SearchBudget:
    return SearchBudget(max_nodes=args.max_nodes, max_seconds=args.budget)


def _pattern(args) -> Graph:
    if args.pattern is not None:
        try:
            return parse_graph6(args.pattern)
        except Graph6Error as exc:
            raise UsageError(f"bad graph6 pattern: {exc}") from exc
    fam = args.family
    if fam is None:
        raise UsageError("give --pattern or --family")
    try:
        if fam == "path":
            return path_graph(_need(args, "v"))
        if fam == "cycle":
            return cycle_graph(_need(args, "v"))
        if fam == "clique":
            return Graph.complete(_need(args, "v"))
        if fam == "star":
            return star_graph(_need(args, "v") - 1)
        if fam == "biclique":
            return complete_bipartite(_need(args, "a"), _need(args, "b"))
        if fam == "double-star":
            return cons.double_star(_need(args, "a"), _need(args, "b"))
        if fam == "clique-path":
            return cons.clique_path_graph(_need(args, "a"), _need(args, "v"))
        if fam == "biclique-path":
            return cons.biclique_path_graph(_need(args, "a"), _need(args, "v"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError(f"unknown family {fam!r}")


def _need(args, name: str) -> int:
    val = getattr(args, name, None)
    if val is None:
        raise UsageError(f"--family {args.family} needs --{name}")
    return val


def _add_pattern_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pattern", help="pattern in graph6")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--v", type=int, help="number of vertices (path, cycle, clique, star, *-path)")
    p.add_argument("--a", type=int, help="first size parameter (biclique, double-star, t of *-path)")
    p.add_argument("--b", type=int, help="second size parameter")


def _add_budget_args(p: argparse.ArgumentParser, seconds: float, nodes: int) -> None:
    p.add_argument("--budget", type=float, default=seconds, help="search time limit in seconds")
    p.add_argument("--max-nodes", type=int, default=nodes)
    p.add_argument("--jobs", type=int, default=1, help="engine worker processes")


def _read_colouring(path: str) -> tuple[EdgeColouring, dict[str, str]]:
    text = Path(path).read_text()
    meta = {}
    for line in text.splitlines():
        if line.startswith("#"):
            parts = line[1:].split(None, 1)
            if len(parts) == 2:
                meta[parts[0]] = parts[1].strip()
    return parse_colouring(text), meta


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------------


def cmd_ramsey(args) -> int:
    g = _pattern(args)
    res = ramsey_number(g, args.colours, _budget(args), jobs=args.jobs)
    if res.exact:
        print(f"exact {res.value}")
    else:
        hi = "UNKNOWN" if res.hi is None else res.hi
        print(f"interval {res.lo} {hi}")
    print(res.to_json())
    if args.family == "path" and args.colours == 2:
        v = g.n
        m = v - 1
        law, edge = path_ramsey_oracle(v), path_ramsey_edge_formula(m)
        print(f"path law v+floor(v/2)-1 = {law}")
        print(f"edge-count expression ceil((3m+1)/2) with m={m} = {edge}")
        if law != edge:
            print(f"discrepancy: expressions differ by {edge - law} (m even)")
        else:
            print("discrepancy: none")
    return EXIT_OK if res.exact else EXIT_INVALID


def _read_f_table(path: str) -> dict[int, int]:
    table = {}
    for ln, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"line {ln}: expected 'n f(n)'")
        try:
            table[int(parts[0])] = int(parts[1])
        except ValueError as exc:
            raise UsageError(f"line {ln}: non-integer entry") from exc
    return table


def cmd_construct(args) -> int:
    if args.variant == "multipartite":
        if args.k is None or args.t is None:
            raise UsageError("multipartite needs --k and --t")
        try:
            g = cons.multipartite_path_graph(args.k, args.t, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        print(write_graph6(g))
        print(f"case=multipartite k={args.k} t={args.t} n={args.n}")
        return EXIT_OK
    if args.f is not None:
        f_values = _read_f_table(args.f)
    elif args.preset is not None:
        f_values = cons.preset_values(args.preset, args.n)
    else:
        raise UsageError("give --preset or --f")
    oracle = cons.RamseyOracle(SearchBudget(args.max_nodes, args.budget))
    try:
        built = cons.build_G(f_values, args.n, oracle, variant=args.variant, strict=args.strict)
    except cons.OracleInsufficient as exc:
        hi = "inf" if exc.hi is None else exc.hi
        print(f"ORACLE_INSUFFICIENT family={exc.family} t={exc.param} interval=[{exc.lo}, {hi}] f(n)={exc.query}")
        return EXIT_ORACLE
    except cons.OutOfRegime as exc:
        print(f"OUT_OF_REGIME {exc}")
        return EXIT_REGIME
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(write_graph6(built.graph))
    print(f"case={built.case} t={built.t} regime={built.regime} n={args.n} f(n)={built.fn_value}")
    for e in built.entries:
        print(f"oracle {e.to_line()}")
    return EXIT_OK


def cmd_extract(args) -> int:
    try:
        c, _ = _read_colouring(args.colouring)
    except (OSError, ColouringFormatError) as exc:
        raise UsageError(str(exc)) from exc
    trace: list = []
    fn = extract_case1 if args.case == 1 else extract_case2
    try:
        out = fn(c, args.t, args.n, seed=args.seed, trace=trace)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    record = out.to_record()
    trace.append({"step": "outcome", **record})
    if args.trace:
        Path(args.trace).write_text(trace_to_text(trace))
    print(json.dumps(record, sort_keys=True))
    return EXIT_OK if out.verify(c) else EXIT_INVALID


def cmd_witness(args) -> int:
    g = _pattern(args)
    if args.blocked is not None:
        try:
            h = parse_graph6(args.blocked)
        except Graph6Error as exc:
            raise UsageError(f"bad graph6 for --blocked: {exc}") from exc
        oracle = cons.RamseyOracle(SearchBudget(args.max_nodes, args.budget))
        try:
            bound, w = r3_lower_bound(g, h, oracle)
        except cons.OracleInsufficient as exc:
            print(f"ORACLE_INSUFFICIENT R(H) in [{exc.lo}, inf]", file=sys.stderr)
            return EXIT_ORACLE
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        comments = [f"pattern {write_graph6(g)}", f"lower_bound R_3 >= {bound}", f"blocks {write_graph6(h)}"]
        _emit(write_colouring(w, comments), args.out)
        return EXIT_OK
    if args.N is None:
        raise UsageError("give --N or --blocked")
    w = search_witness(g, args.N, seed=args.seed)
    if w is None:
        print(f"no witness found on K_{args.N} with seed {args.seed}", file=sys.stderr)
        return EXIT_INVALID
    comments = [f"pattern {write_graph6(g)}", f"lower_bound R >= {args.N + 1}", f"seed {args.seed}"]
    _emit(write_colouring(w, comments), args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    try:
        report = spectrum(args.n, SearchBudget(args.max_nodes, args.budget), witness_seed=args.seed, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    sys.stdout.write(report.to_text())
    fl = check_burr_erdos_floor(report)
    print(f"floor_extremal = [{', '.join(fl.extremal)}]")
    if args.gaps is not None:
        c = Fraction(args.gaps)
        hi = max(report.R_connected) if report.R_connected else args.n
        print(f"c_gaps(c={c}) = {find_c_gaps(report.R_connected, c, args.n, hi)}")
    if args.inclusion:
        for e in check_interval_inclusion(args.n, SearchBudget(args.max_nodes, args.budget)):
            print(f"inclusion v={e.value} a={e.a} i={e.i} graph={e.graph6} status={e.status}")
    return EXIT_OK


def _verify_trace(c: EdgeColouring, records: list[dict]) -> bool:
    ok = True
    for rec in records:
        step = rec.get("step")
        if step == "mono_path":
            ok &= is_mono_path(c, rec["colour"], rec["path"])
        elif step == "tiling":
            flat = [v for tile in rec["tiles"] for v in tile]
            ok &= len(flat) == len(set(flat))
        elif step == "shortcut" and "A" in rec:
            ok &= is_mono_biclique(c, _path_colour(records), rec["A"], rec["B"])
        elif step == "shortcut":
            ok &= is_mono_clique(c, _path_colour(records), rec["clique"])
        elif step == "outcome" or (step in ("stitch", "assemble", "cover") and "kind" in rec):
            ok &= _verify_record(c, rec)
    return bool(ok) and any(r.get("step") == "outcome" for r in records)


def _path_colour(records: list[dict]) -> int:
    return next(r["colour"] for r in records if r.get("step") == "mono_path")


def _verify_record(c: EdgeColouring, rec: dict) -> bool:
    if rec["kind"] == "embedding":
        out = MonoEmbedding(rec["colour"], Embedding(tuple(rec["map"])), parse_graph6(rec["pattern"]))
    else:
        out = StepFailure(rec["failure"], rec["payload"])
    return out.verify(c)


def cmd_verify(args) -> int:
    try:
        c, meta = _read_colouring(args.colouring)
    except (OSError, ColouringFormatError) as exc:
        raise UsageError(str(exc)) from exc
    if args.trace:
        try:
            records = [json.loads(line) for line in Path(args.trace).read_text().splitlines() if line.strip()]
            ok = _verify_trace(c, records)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad trace: {exc}") from exc
        print("valid" if ok else "INVALID")
        return EXIT_OK if ok else EXIT_INVALID
    if args.embedding:
        try:
            rec = json.loads(Path(args.embedding).read_text())
            ok = _verify_record(c, rec)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad embedding record: {exc}") from exc
        print("valid" if ok else "INVALID")
        return EXIT_OK if ok else EXIT_INVALID
    g6 = args.pattern or meta.get("pattern")
    if g6 is None:
        raise UsageError("no pattern given and none recorded in the colouring file")
    try:
        g = parse_graph6(g6)
    except Graph6Error as exc:
        raise UsageError(f"bad graph6 pattern: {exc}") from exc
    ok = verify_no_mono(c, g)
    print("valid" if ok else "INVALID: monochromatic copy present")
    return EXIT_OK if ok else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ramsey-spectrum", description="Graph Ramsey numbers, constructions and spectra")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ramsey", help="exact Ramsey number or certified interval")
    _add_pattern_args(p)
    p.add_argument("--colours", type=int, default=2, choices=(2, 3))
    _add_budget_args(p, 600.0, 10**8)
    p.set_defaults(func=cmd_ramsey)

    p = sub.add_parser("construct", help="build the graph G_n for a growth function")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=cons.PRESETS)
    src.add_argument("--f", help="file of 'n f(n)' lines")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--variant", choices=("auto", "case1", "case2", "multipartite"), default="auto")
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--strict", action="store_true", help="refuse f(n) outside both regimes")
    _add_budget_args(p, cons.ORACLE_BUDGET.max_seconds, cons.ORACLE_BUDGET.max_nodes)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("extract", help="run a case pipeline on a colouring file")
    p.add_argument("--colouring", required=True)
    p.add_argument("--case", type=int, choices=(1, 2), required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trace", help="write the step trace (JSON lines) here")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("witness", help="emit a colouring avoiding a pattern")
    _add_pattern_args(p)
    p.add_argument("--N", type=int, help="host order for seeded search")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--blocked", metavar="H", help="three-colour blocked witness built from subgraph H (graph6)")
    p.add_argument("--out")
    _add_budget_args(p, 60.0, 10**6)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("spectrum", help="Ramsey spectrum of all graphs on n vertices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True, help="seed for witness search on unresolved classes")
    p.add_argument("--gaps", help="report c-gaps of the connected spectrum for this c (e.g. 4/3)")
    p.add_argument("--inclusion", action="store_true", help="check the double-star interval inclusion")
    _add_budget_args(p, 20.0, 2_000_000)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="check an emitted certificate")
    p.add_argument("--colouring", required=True)
    p.add_argument("--pattern", help="override the pattern recorded in the colouring file")
    p.add_argument("--trace", help="extraction trace to replay")
    p.add_argument("--embedding", help="JSON outcome record from extract")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
