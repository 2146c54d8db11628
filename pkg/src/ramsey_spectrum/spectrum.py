"""Ramsey spectra of small orders and the checks run against them."""
from __future__ import annotations

import bisect
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .constructions import double_star, pad_isolated
from .engine import RamseyResult, SearchBudget, ramsey_number
from .graph import Graph, canonical_form, enumerate_graphs, is_connected, write_graph6
from .lower_bounds import improve_lower_bound, verify_no_mono

SPECTRUM_BUDGET = SearchBudget(max_nodes=2_000_000, max_seconds=20.0)

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"
VERIFIED, UNVERIFIED, MISMATCH = "VERIFIED", "UNVERIFIED", "MISMATCH"


@dataclass
class GraphRecord:
    key: bytes
    graph: Graph
    connected: bool
    no_isolated: bool
    result: RamseyResult

    @property
    def g6(self) -> str:
        return write_graph6(self.graph)


@dataclass
class SpectrumReport:
    n: int
    records: list[GraphRecord]
    R: set[int] = field(default_factory=set)
    R_no_isolated: set[int] = field(default_factory=set)
    R_connected: set[int] = field(default_factory=set)
    unresolved: list[GraphRecord] = field(default_factory=list)

    def __post_init__(self):
        for rec in self.records:
            res = rec.result
            if not res.exact:
                self.unresolved.append(rec)
                continue
            self.R.add(res.value)
            if rec.no_isolated:
                self.R_no_isolated.add(res.value)
            if rec.connected:
                self.R_connected.add(res.value)
        self.check()

    def check(self) -> None:
        if self.n not in self.R:
            raise AssertionError(f"{self.n} missing from the spectrum")
        # K_1 is connected yet its vertex is isolated
        if self.n > 1 and not (self.R_connected <= self.R_no_isolated <= self.R):
            raise AssertionError("spectrum sets are not nested")
        if self.n > 1:
            top = next(r.result for r in self.records if r.graph.num_edges == self.n * (self.n - 1) // 2)
            cap = top.hi
            if any(v < self.n or (cap is not None and v > cap) for v in self.R):
                raise AssertionError("spectrum value outside [n, R(K_n)]")
        if len({r.key for r in self.records}) != len(self.records):
            raise AssertionError("duplicate isomorphism class")

    def connected_records(self) -> list[GraphRecord]:
        return [r for r in self.records if r.connected]

    def to_text(self) -> str:
        lines = [f"# spectrum n={self.n}", "graph6\tconnected\tno_isolated\tlo\thi\tcertificate"]
        for r in self.records:
            res = r.result
            hi = "UNKNOWN" if res.hi is None else str(res.hi)
            lines.append(f"{r.g6}\t{int(r.connected)}\t{int(r.no_isolated)}\t{res.lo}\t{hi}\t{res.upper_certificate}")
        lines.append("")
        lines.append(f"R_n = {_fmt(self.R)}")
        lines.append(f"R_n_no_isolated = {_fmt(self.R_no_isolated)}")
        lines.append(f"R_n_connected = {_fmt(self.R_connected)}")
        lines.append(f"unresolved = [{', '.join(r.g6 for r in self.unresolved)}]")
        floor = check_burr_erdos_floor(self)
        lines.append(f"connected_floor = {floor.floor} min = {floor.minimum} status = {floor.status}")
        return "\n".join(lines) + "\n"


def _fmt(values: Iterable[int]) -> str:
    return "{" + ", ".join(str(v) for v in sorted(values)) + "}"


def _resolve(args) -> RamseyResult:
    g, budget, witness_seed, patience = args
    res = ramsey_number(g, 2, budget)
    if res.exact or witness_seed is None:
        return res
    lo, w = improve_lower_bound(g, res.lo, seed=witness_seed, patience=patience)
    if w is not None and lo > res.lo and verify_no_mono(w, g):
        return RamseyResult(g, 2, lo, None, res.upper_certificate, w, "witness_search", res.nodes, res.seconds)
    return res


def spectrum(
    n: int,
    budget: SearchBudget = SPECTRUM_BUDGET,
    witness_seed: Optional[int] = 0,
    jobs: int = 1,
    patience: int = 5,
) -> SpectrumReport:
    """Ramsey numbers of every graph on ``n`` vertices, one per class.

    Classes the engine cannot settle within ``budget`` keep an interval; when
    ``witness_seed`` is not None their lower end is raised by seeded witness
    search.  Records are ordered by canonical form.
    """
    if not 1 <= n <= 6:
        raise ValueError("spectrum is supported for 1 <= n <= 6")
    graphs = list(enumerate_graphs(n, "all"))
    args = [(g, budget, witness_seed, patience) for g in graphs]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_resolve, args))
    else:
        results = [_resolve(a) for a in args]
    records = [
        GraphRecord(canonical_form(g), g, is_connected(g), not g.isolated_vertices(), res)
        for g, res in zip(graphs, results)
    ]
    records.sort(key=lambda r: r.key)
    return SpectrumReport(n, records)


@dataclass
class FloorCheck:
    status: str
    floor: int
    minimum: Optional[int]
    extremal: list[str]
    below: list[str] = field(default_factory=list)


def burr_erdos_floor(n: int) -> int:
    return -(-4 * n // 3) - 1


def check_burr_erdos_floor(report: SpectrumReport) -> FloorCheck:
    """Compare connected classes with ceil(4n/3) - 1.

    Exact values and interval lower ends both count; an unresolved class
    whose lower end sits below the floor makes the check inconclusive.
    """
    floor = burr_erdos_floor(report.n)
    conn = report.connected_records()
    if not conn:
        return FloorCheck(PASS, floor, None, [])
    exact = [r for r in conn if r.result.exact]
    below_exact = [r.g6 for r in exact if r.result.value < floor]
    below_open = [r.g6 for r in conn if not r.result.exact and r.result.lo < floor]
    minimum = min(r.result.lo for r in conn)
    extremal = [r.g6 for r in exact if r.result.value == minimum]
    if below_exact:
        return FloorCheck(FAIL, floor, minimum, extremal, below_exact)
    if below_open:
        return FloorCheck(INCONCLUSIVE, floor, minimum, extremal, below_open)
    return FloorCheck(PASS, floor, minimum, extremal)


@dataclass
class InclusionEntry:
    value: int
    a: Optional[int]
    i: Optional[int]
    graph6: Optional[str]
    status: str
    lo: Optional[int] = None
    hi: Optional[int] = None


def inclusion_interval(n: int) -> tuple[int, int]:
    """[n, floor(3(n-2)/2) - 3]; empty when the right end is below n."""
    return n, (3 * (n - 2)) // 2 - 3


def double_star_candidates(v: int, n: int) -> list[tuple[int, int]]:
    """(a, i) with i in {0,1,2}, 3a - 2i = v and 2a - i + 2 <= n."""
    out = []
    for i in (0, 1, 2):
        if (v + 2 * i) % 3 == 0:
            a = (v + 2 * i) // 3
            if a - i >= 1 and 2 * a - i + 2 <= n:
                out.append((a, i))
    return out


def check_interval_inclusion(n: int, budget: SearchBudget = SPECTRUM_BUDGET) -> list[InclusionEntry]:
    """For each v in the inclusion interval, a padded double star whose
    Ramsey number is claimed to be v, with the engine's verdict."""
    lo, hi = inclusion_interval(n)
    out = []
    for v in range(lo, hi + 1):
        cands = double_star_candidates(v, n)
        if not cands:
            out.append(InclusionEntry(v, None, None, None, UNVERIFIED))
            continue
        a, i = cands[0]
        g = pad_isolated(double_star(a, a - i), n)
        res = ramsey_number(g, 2, budget)
        if res.exact:
            status = VERIFIED if res.value == v else MISMATCH
        else:
            status = UNVERIFIED
        out.append(InclusionEntry(v, a, i, write_graph6(g), status, res.lo, res.hi))
    return out


def find_c_gaps(values: Iterable[int], c, lo: int, hi: int) -> list[int]:
    """Every a in [lo, hi] such that no value lies in [a, ceil(c*a)]."""
    c = Fraction(c)
    if c <= 1:
        raise ValueError("c must exceed 1")
    vals = sorted(set(values))
    gaps = []
    for a in range(lo, hi + 1):
        top = math.ceil(c * a)
        k = bisect.bisect_left(vals, a)
        if k == len(vals) or vals[k] > top:
            gaps.append(a)
    return gaps


__all__ = [
    "SpectrumReport", "GraphRecord", "spectrum", "check_burr_erdos_floor", "check_interval_inclusion",
    "find_c_gaps", "burr_erdos_floor", "inclusion_interval", "FloorCheck", "InclusionEntry"
]
