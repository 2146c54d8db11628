"""Exact arrowing search and Ramsey numbers with certificates.

The search runs vertex by vertex.  Level ``m`` holds one representative of
every pattern-free r-colouring of K_m up to relabelling vertices and
permuting colours.  A level is extended by backtracking over the colours of
the pairs ``{0,m}, {1,m}, ..., {m-1,m}`` (colex order); after each pair is
coloured the search asks only whether a monochromatic copy runs through that
newest pair, since every other copy would have been caught earlier.
Surviving children are deduplicated by canonical form.  K_N arrows the
pattern exactly when level ``N`` comes out empty.
"""
from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional

from .canon import _Orbits, canonical_labelling
from .colouring import EdgeColouring, colour_class
from .graph import Embedding, Graph, canonical_form, find_embedding, write_graph6

log = logging.getLogger(__name__)

ENGINE_VERSION = "1"

ARROWS = "ARROWS"
WITNESS = "WITNESS"
UNKNOWN = "UNKNOWN"

PROVED_BY_SEARCH = "PROVED_BY_SEARCH"
BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"
KNOWN_BOUND = "KNOWN_BOUND"


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 10**8
    max_seconds: float = 600.0

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_seconds <= 0:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = SearchBudget()


@dataclass
class RamseyResult:
    pattern: Graph
    r: int
    lo: int
    hi: Optional[int]
    upper_certificate: str
    witness: Optional[EdgeColouring] = None
    bound_name: Optional[str] = None
    nodes: int = 0
    seconds: float = 0.0

    def __post_init__(self):
        if self.hi is not None and self.lo > self.hi:
            raise ValueError(f"lo {self.lo} exceeds hi {self.hi}")
        if self.exact and self.upper_certificate != PROVED_BY_SEARCH:
            raise ValueError("exact results must be proved by search")

    @property
    def exact(self) -> bool:
        return self.hi is not None and self.lo == self.hi

    @property
    def value(self) -> int:
        if not self.exact:
            raise ValueError("Ramsey number not resolved")
        return self.lo

    def to_record(self) -> dict:
        return {
            "pattern": write_graph6(self.pattern),
            "r": self.r,
            "lo": self.lo,
            "hi": self.hi,
            "exact": self.exact,
            "certificate": self.upper_certificate,
            "bound_name": self.bound_name,
            "nodes": self.nodes,
            "seconds": round(self.seconds, 3),
            "engine_version": ENGINE_VERSION,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True)


@dataclass
class ArrowsOutcome:
    kind: str
    witness: Optional[EdgeColouring] = None
    nodes: int = 0
    seconds: float = 0.0


def find_mono_copy(c: EdgeColouring, pattern: Graph) -> tuple[int, Embedding] | None:
    """Lowest colour first, then the lexicographically least embedding."""
    if pattern.n > c.N:
        return None
    for colour in range(c.r):
        emb = find_embedding(colour_class(c, colour), pattern)
        if emb is not None:
            return colour, emb
    return None


# -- anchored copy detection -------------------------------------------------


class _Plan:
    """Embedding orders for copies of ``core`` through a fixed host edge.

    One order per orbit of ordered pattern edges under the automorphisms
    found for ``core``: position 0 and 1 are the anchored edge, later
    positions list which earlier positions they must be adjacent to.
    """

    def __init__(self, core: Graph):
        self.k = core.n
        gens = canonical_labelling(core.n, [core.rows])[2] if core.n else []
        arcs = [(u, v) for u in range(core.n) for v in range(core.n) if core.has_edge(u, v)]
        index = {a: i for i, a in enumerate(arcs)}
        uf = _Orbits(len(arcs), [])
        for g in gens:
            for i, (u, v) in enumerate(arcs):
                uf.union(i, index[(g[u], g[v])])
        reps = [a for i, a in enumerate(arcs) if uf.find(i) == i]
        self.anchors = [self._order(core, u, v) for u, v in reps]

    @staticmethod
    def _order(core: Graph, u: int, v: int):
        order = [u, v]
        placed = {u, v}
        while len(order) < core.n:
            best, bestkey = None, None
            for w in range(core.n):
                if w in placed:
                    continue
                links = sum(1 for p in order if core.has_edge(w, p))
                key = (links, core.degree(w), -w)
                if bestkey is None or key > bestkey:
                    best, bestkey = w, key
            order.append(best)
            placed.add(best)
        pos = {w: i for i, w in enumerate(order)}
        back = [tuple(pos[p] for p in order[:i] if core.has_edge(w, p)) for i, w in enumerate(order)]
        deg = [core.degree(w) for w in order]
        return back, deg


def _through(rows, alive: int, a: int, b: int, plan: _Plan) -> bool:
    k = plan.k
    da, db = rows[a].bit_count(), rows[b].bit_count()
    for back, deg in plan.anchors:
        if da < deg[0] or db < deg[1]:
            continue
        img = [a, b] + [0] * (k - 2)
        if _extend(rows, alive, img, 2, (1 << a) | (1 << b), back, deg, k):
            return True
    return False


def _extend(rows, alive, img, p, used, back, deg, k) -> bool:
    if p == k:
        return True
    bp = back[p]
    if bp:
        c = rows[img[bp[0]]]
        for q in bp[1:]:
            c &= rows[img[q]]
    else:
        c = alive
    c &= ~used
    d = deg[p]
    while c:
        low = c & -c
        c ^= low
        x = low.bit_length() - 1
        if rows[x].bit_count() < d:
            continue
        img[p] = x
        if _extend(rows, alive, img, p + 1, used | low, back, deg, k):
            return True
    return False


# -- level search ---------------------------------------------------------------


class _Exhausted(Exception):
    pass


def _colouring_key(m: int, rows, r: int) -> tuple:
    """Canonical key of a colouring up to vertex and colour permutations."""
    counts = [sum(x.bit_count() for x in rows[c]) for c in range(r)]
    best = None
    for perm in permutations(range(r)):
        if any(counts[perm[i]] > counts[perm[i + 1]] for i in range(r - 1)):
            continue
        cert = canonical_labelling(m, [rows[c] for c in perm[1:]])[1]
        if best is None or cert < best:
            best = cert
    return tuple(sorted(counts)), best


def _children(parent, m: int, r: int, plan: _Plan | None, node_limit: int):
    """Pattern-free one-vertex extensions of ``parent`` (colourings of K_m)
    in backtracking order, plus the number of pair assignments made."""
    rows = [list(layer) + [0] for layer in parent]
    out = []
    nodes = 0
    bit_new = 1 << m
    alive = (1 << (m + 1)) - 1

    def dfs(i: int) -> None:
        nonlocal nodes
        if i == m:
            out.append(tuple(tuple(layer) for layer in rows))
            return
        for c in range(r):
            nodes += 1
            if nodes > node_limit:
                raise _Exhausted
            layer = rows[c]
            layer[i] |= bit_new
            layer[m] |= 1 << i
            if plan is None or not _through(layer, alive, i, m, plan):
                dfs(i + 1)
            layer[i] ^= bit_new
            layer[m] ^= 1 << i

    try:
        dfs(0)
    except _Exhausted:
        return out, nodes, True
    return out, nodes, False


def _expand_chunk(args):
    parents, m, r, core_rows, core_n, node_limit = args
    core = Graph(core_n, core_rows)
    plan = _Plan(core) if m + 1 >= core_n and core_n > 0 else None
    res = []
    total = 0
    for p in parents:
        kids, nodes, hit = _children(p, m, r, plan, node_limit - total)
        total += nodes
        res.append(kids)
        if hit:
            return res, total, True
    return res, total, False


@dataclass
class _LevelState:
    core: Graph
    r: int
    levels: list = field(default_factory=list)


_LEVEL_CACHE: dict[tuple[bytes, int], _LevelState] = {}


def clear_cache() -> None:
    _LEVEL_CACHE.clear()
    _RESULT_CACHE.clear()


class _Search:
    def __init__(self, core: Graph, r: int, budget: SearchBudget, jobs: int = 1, iso_depth: int | None = None):
        self.core = core
        self.r = r
        self.budget = budget
        self.jobs = jobs
        self.iso_depth = iso_depth
        key = (canonical_form(core), r)
        if iso_depth is not None:
            self.state = _LevelState(core, r)
        else:
            self.state = _LEVEL_CACHE.setdefault(key, _LevelState(core, r))
        # the cached levels are labelled for the canonical representative
        self.plan = _Plan(core) if core.n else None
        self.nodes = 0
        self.start = time.monotonic()
        if not self.state.levels:
            # K_1: a single empty colouring
            self.state.levels.append([tuple(() for _ in range(r))])
            self.state.levels.append([tuple((0,) for _ in range(r))])
        self.partial: list = []

    def level(self, m: int) -> list:
        """All pattern-free colourings of K_m (one per class); raises
        ``_Exhausted`` when the budget runs out part-way."""
        levels = self.state.levels
        while len(levels) <= m:
            cur = len(levels) - 1
            if not levels[cur]:
                levels.append([])
                continue
            levels.append(self._next(levels[cur], cur))
        return levels[m]

    def _remaining_nodes(self) -> int:
        return self.budget.max_nodes - self.nodes

    def _check_time(self) -> None:
        if time.monotonic() - self.start > self.budget.max_seconds:
            raise _Exhausted

    def _next(self, parents: list, m: int) -> list:
        r = self.r
        plan = self.plan if self.core.n and m + 1 >= self.core.n else None
        dedupe = self.iso_depth is None or (m + 1) * m // 2 <= self.iso_depth
        seen: dict = {}
        out: list = []
        self.partial = out

        def absorb(kids):
            for child in kids:
                if dedupe:
                    key = _colouring_key(m + 1, child, r)
                    if key in seen:
                        continue
                    seen[key] = True
                out.append(child)

        if self.jobs > 1 and len(parents) > 4 * self.jobs:
            chunk = max(1, len(parents) // (8 * self.jobs))
            chunks = [parents[i : i + chunk] for i in range(0, len(parents), chunk)]
            with ProcessPoolExecutor(self.jobs) as pool:
                futures = [
                    pool.submit(_expand_chunk, (ch, m, r, self.core.rows, self.core.n, self._remaining_nodes()))
                    for ch in chunks
                ]
                for fut in futures:
                    res, nodes, hit = fut.result()
                    self.nodes += nodes
                    for kids in res:
                        absorb(kids)
                    if hit or self.nodes > self.budget.max_nodes:
                        for f in futures:
                            f.cancel()
                        raise _Exhausted
                    self._check_time()
        else:
            for idx, p in enumerate(parents):
                kids, nodes, hit = _children(p, m, r, plan, self._remaining_nodes())
                self.nodes += nodes
                absorb(kids)
                if hit:
                    raise _Exhausted
                if idx % 16 == 0:
                    self._check_time()
        log.debug("level %d: %d classes (%d nodes so far)", m + 1, len(out), self.nodes)
        return out


def _to_colouring(m: int, r: int, rows) -> EdgeColouring:
    return EdgeColouring.from_rows(m, r, rows[1:])


def _verified_witness(c: EdgeColouring, pattern: Graph) -> EdgeColouring:
    if find_mono_copy(c, pattern) is not None:
        raise AssertionError("engine produced a witness containing the pattern")
    return c


def arrows(
    N: int,
    r: int,
    pattern: Graph,
    budget: SearchBudget | None = None,
    jobs: int = 1,
    iso_depth: int | None = None,
) -> ArrowsOutcome:
    """Decide whether every r-colouring of K_N has a monochromatic ``pattern``."""
    if N < 1:
        raise ValueError("N must be positive")
    budget = budget or DEFAULT_BUDGET
    t0 = time.monotonic()
    if N < pattern.n:
        w = EdgeColouring.monochromatic(N, r=r)
        return ArrowsOutcome(WITNESS, _verified_witness(w, pattern), 0, 0.0)
    core = pattern.without_isolated()
    if core.n == 0:
        return ArrowsOutcome(ARROWS, None, 0, 0.0)
    search = _Search(canonical_graph_of(core), r, budget, jobs, iso_depth)
    try:
        for m in range(core.n, N + 1):
            if not search.level(m):
                return ArrowsOutcome(ARROWS, None, search.nodes, time.monotonic() - t0)
    except _Exhausted:
        if len(search.state.levels) == N and search.partial:
            w = _to_colouring(N, r, search.partial[0])
            return ArrowsOutcome(WITNESS, _verified_witness(w, pattern), search.nodes, time.monotonic() - t0)
        return ArrowsOutcome(UNKNOWN, None, search.nodes, time.monotonic() - t0)
    w = _to_colouring(N, r, search.level(N)[0])
    return ArrowsOutcome(WITNESS, _verified_witness(w, pattern), search.nodes, time.monotonic() - t0)


def canonical_graph_of(g: Graph) -> Graph:
    return Graph(g.n, canonical_labelling(g.n, [g.rows])[1][0])


_RESULT_CACHE: dict[tuple[bytes, int], RamseyResult] = {}


def ramsey_number(
    pattern: Graph,
    r: int = 2,
    budget: SearchBudget | None = None,
    jobs: int = 1,
) -> RamseyResult:
    """Least N with K_N -> (pattern)_r, or a certified interval on budget exhaustion."""
    if pattern.n < 1:
        raise ValueError("pattern needs at least one vertex")
    if r not in (2, 3):
        raise ValueError("r must be 2 or 3")
    budget = budget or DEFAULT_BUDGET
    ckey = (canonical_form(pattern), r)
    if ckey in _RESULT_CACHE:
        cached = _RESULT_CACHE[ckey]
        return RamseyResult(pattern, r, cached.lo, cached.hi, cached.upper_certificate, cached.witness,
                            None, cached.nodes, cached.seconds)
    t0 = time.monotonic()
    n = pattern.n
    core = pattern.without_isolated()
    if core.n == 0:
        w = EdgeColouring.monochromatic(n - 1, r=r)
        res = RamseyResult(pattern, r, n, n, PROVED_BY_SEARCH, _verified_witness(w, pattern))
        _RESULT_CACHE[ckey] = res
        return res
    search = _Search(canonical_graph_of(core), r, budget, jobs)
    best_m, best_rows = 0, None
    m = 1
    try:
        while True:
            lvl = search.level(m)
            if not lvl:
                break
            best_m, best_rows = m, lvl[0]
            m += 1
    except _Exhausted:
        if len(search.state.levels) == m and search.partial:
            best_m, best_rows = m, search.partial[0]
        lo = max(n, best_m + 1)
        res = RamseyResult(pattern, r, lo, None, BUDGET_EXHAUSTED, _witness_for(pattern, r, lo, best_m, best_rows),
                           None, search.nodes, time.monotonic() - t0)
        return res
    value = max(n, m)
    res = RamseyResult(pattern, r, value, value, PROVED_BY_SEARCH,
                       _witness_for(pattern, r, value, best_m, best_rows), None,
                       search.nodes, time.monotonic() - t0)
    _RESULT_CACHE[ckey] = res
    return res


def _witness_for(pattern: Graph, r: int, lo: int, best_m: int, best_rows) -> EdgeColouring:
    if best_m == lo - 1 and best_rows is not None:
        w = _to_colouring(best_m, r, best_rows)
    else:
        w = EdgeColouring.monochromatic(lo - 1, r=r)
    return _verified_witness(w, pattern)


# -- paths ----------------------------------------------------------------------


def path_ramsey_oracle(v: int) -> int:
    """Two-colour Ramsey number of the path on ``v`` vertices."""
    if v < 2:
        raise ValueError("path needs at least 2 vertices")
    return v + v // 2 - 1


def path_ramsey_edge_formula(m: int) -> int:
    """The expression ceil((3m+1)/2) with ``m`` read as the number of edges."""
    return -(-(3 * m + 1) // 2)
