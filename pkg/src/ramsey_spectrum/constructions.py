"""Graph families with prescribed Ramsey growth and the rules that pick them."""
from __future__ import annotations

import fcntl
import math
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .engine import (
    ENGINE_VERSION,
    KNOWN_BOUND,
    PROVED_BY_SEARCH,
    RamseyResult,
    SearchBudget,
    ramsey_number,
)
from .graph import Graph, complete_bipartite

# c1 and c2 bound R(K_{t+1}) / R(K_t) and R(K_{t+1,t+1}) / R(K_{t,t}); no
# explicit values are known, they only size suggested hosts in demos.
C1_DEFAULT = 4.0
C2_DEFAULT = 4.0

ORACLE_BUDGET = SearchBudget(max_nodes=200_000, max_seconds=30.0)


class OracleInsufficient(Exception):
    """The oracle only knows an interval that straddles the query."""

    def __init__(self, family: str, param: int, lo: int, hi: Optional[int], query: int):
        self.family, self.param, self.lo, self.hi, self.query = family, param, lo, hi, query
        hi_s = "inf" if hi is None else str(hi)
        super().__init__(f"R({family}_{param}) only known to lie in [{lo}, {hi_s}], straddling {query}")


class OutOfRegime(ValueError):
    pass


# -- builders ---------------------------------------------------------------------


def _with_pendant_path(base_edges: list[tuple[int, int]], base_n: int, n: int) -> Graph:
    edges = list(base_edges)
    if n > base_n:
        edges.append((0, base_n))
        edges += [(v, v + 1) for v in range(base_n, n - 1)]
    return Graph.from_edges(n, edges)


def biclique_path_graph(t: int, n: int) -> Graph:
    """K_{t,t} (classes ``0..t-1`` and ``t..2t-1``) with a path on the
    remaining ``n - 2t`` vertices hanging off vertex 0."""
    if t < 1 or n < 2 * t:
        raise ValueError(f"need n >= 2t >= 2, got t={t}, n={n}")
    return _with_pendant_path(complete_bipartite(t, t).edges(), 2 * t, n)


def clique_path_graph(t: int, n: int) -> Graph:
    if t < 1 or n < t:
        raise ValueError(f"need n >= t >= 1, got t={t}, n={n}")
    return _with_pendant_path(Graph.complete(t).edges(), t, n)


def complete_multipartite(k: int, t: int) -> Graph:
    return Graph.from_edges(
        k * t, [(u, v) for u in range(k * t) for v in range(u + 1, k * t) if u // t != v // t]
    )


def multipartite_path_graph(k: int, t: int, n: int) -> Graph:
    if k < 1 or t < 1 or n < k * t:
        raise ValueError(f"need n >= kt, got k={k}, t={t}, n={n}")
    return _with_pendant_path(complete_multipartite(k, t).edges(), k * t, n)


def double_star(a: int, b: int) -> Graph:
    """Disjoint union K_{1,a} + K_{1,b}; centres are 0 and a+1."""
    if a < 1 or b < 1:
        raise ValueError("both stars need at least one leaf")
    edges = [(0, i) for i in range(1, a + 1)] + [(a + 1, a + 2 + j) for j in range(b)]
    return Graph.from_edges(a + b + 2, edges)


def clique_plus_isolated(t: int, n: int) -> Graph:
    if t < 1 or n < t:
        raise ValueError(f"need n >= t >= 1, got t={t}, n={n}")
    return Graph.from_edges(n, Graph.complete(t).edges())


def pad_isolated(g: Graph, n: int) -> Graph:
    if n < g.n:
        raise ValueError("cannot pad to fewer vertices")
    return Graph.from_edges(n, g.edges())


# -- oracle ---------------------------------------------------------------------


@dataclass(frozen=True)
class OracleEntry:
    family: str
    param: int
    lo: int
    hi: Optional[int]
    certificate: str
    bound_name: Optional[str] = None
    engine_version: str = ENGINE_VERSION

    @property
    def exact(self) -> bool:
        return self.hi is not None and self.lo == self.hi

    def to_line(self) -> str:
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{self.family} {self.param} {self.lo} {hi} {self.certificate} {self.engine_version}"

    @classmethod
    def from_line(cls, line: str) -> "OracleEntry":
        fam, param, lo, hi, cert, ver = line.split()
        return cls(fam, int(param), int(lo), None if hi == "inf" else int(hi), cert, None, ver)


FAMILIES = {
    "K": lambda t: Graph.complete(t),
    "Ktt": lambda t: complete_bipartite(t, t),
}


class RamseyOracle:
    """Two-colour Ramsey values for cliques and balanced bicliques.

    Exact entries come from the engine only.  When the engine runs out of
    budget the entry is an interval combining the engine's witness bound
    with the classical bounds 2^{t/2} <= R(K_t) <= 4^t and
    R(K_{t,t}) >= 2^{t/2}.  Results are optionally persisted to a text
    ledger ``oracle.ledger`` in ``cache_dir`` (default ``$RAMSEY_CACHE``).
    """

    LEDGER = "oracle.ledger"

    def __init__(self, budget: SearchBudget = ORACLE_BUDGET, cache_dir: str | os.PathLike | None = None):
        self.budget = budget
        self._lock = threading.Lock()
        self._entries: dict[tuple[str, int], OracleEntry] = {}
        self._results: dict[tuple[str, int], RamseyResult] = {}
        if cache_dir is None:
            cache_dir = os.environ.get("RAMSEY_CACHE")
        self.path = Path(cache_dir) / self.LEDGER if cache_dir else None
        if self.path is not None and self.path.exists():
            for line in self.path.read_text().splitlines():
                if line.strip() and not line.startswith("#"):
                    e = OracleEntry.from_line(line)
                    if e.engine_version == ENGINE_VERSION and e.exact:
                        self._entries[(e.family, e.param)] = e

    def entry(self, family: str, t: int) -> OracleEntry:
        key = (family, t)
        snapshot = self._entries.get(key)
        if snapshot is not None:
            return snapshot
        res = ramsey_number(FAMILIES[family](t), 2, self.budget)
        if res.exact:
            e = OracleEntry(family, t, res.lo, res.hi, PROVED_BY_SEARCH)
        else:
            lo = max(res.lo, math.ceil(2 ** (t / 2)))
            hi, name = None, "biclique_probabilistic_lower"
            if family == "K":
                hi, name = 4**t, "erdos_szekeres_upper"
            e = OracleEntry(family, t, lo, hi, KNOWN_BOUND, name)
        with self._lock:
            self._entries[key] = e
            self._results[key] = res
            if self.path is not None and e.exact:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a") as fh:
                    # other processes may share the ledger directory
                    fcntl.flock(fh, fcntl.LOCK_EX)
                    fh.write(e.to_line() + "\n")
                    fcntl.flock(fh, fcntl.LOCK_UN)
        return e

    def clique(self, t: int) -> OracleEntry:
        return self.entry("K", t)

    def biclique(self, t: int) -> OracleEntry:
        return self.entry("Ktt", t)

    def graph(self, g: Graph) -> RamseyResult:
        """Exact engine result for an arbitrary graph, or OracleInsufficient."""
        res = ramsey_number(g, 2, self.budget)
        if not res.exact:
            raise OracleInsufficient("G", g.n, res.lo, res.hi, res.lo)
        return res


def select_t_case1(fn_value: int, oracle: RamseyOracle, t_max: int = 32) -> int:
    """Least t with R(K_{t,t}) > fn_value."""
    if fn_value < 1:
        raise ValueError("f(n) must be positive")
    for t in range(1, t_max + 1):
        e = oracle.biclique(t)
        if e.lo > fn_value:
            return t
        if e.hi is not None and e.hi <= fn_value:
            continue
        raise OracleInsufficient("Ktt", t, e.lo, e.hi, fn_value)
    raise OracleInsufficient("Ktt", t_max, 0, None, fn_value)


def select_t_case2(fn_value: int, oracle: RamseyOracle, t_max: int = 64) -> int:
    """Least t with R(K_t) >= fn_value."""
    if fn_value < 1:
        raise ValueError("f(n) must be positive")
    for t in range(1, t_max + 1):
        e = oracle.clique(t)
        if e.lo >= fn_value:
            return t
        if e.hi is not None and e.hi < fn_value:
            continue
        raise OracleInsufficient("K", t, e.lo, e.hi, fn_value)
    raise OracleInsufficient("K", t_max, 0, None, fn_value)


def case1_in_range(n: int, fn: int) -> bool:
    """n <= f(n) <= 2^{n/8}, compared exactly as f(n)^8 <= 2^n."""
    return n <= fn and fn**8 <= 2**n


def case2_threshold(n: int) -> int:
    """ceil(2 n log2 n), the lower end of the second regime."""
    return math.ceil(2 * n * math.log2(n)) if n > 1 else 0


def case2_in_range(n: int, fn: int) -> bool:
    return fn >= case2_threshold(n)


@dataclass
class Construction:
    graph: Graph
    case: str
    t: int
    regime: str
    fn_value: int
    entries: list[OracleEntry] = field(default_factory=list)


def build_G(
    f_values: Mapping[int, int],
    n: int,
    oracle: RamseyOracle,
    variant: str = "auto",
    strict: bool = False,
) -> Construction:
    """Connected n-vertex graph whose Ramsey number tracks f(n).

    ``variant`` is ``auto``, ``case1`` or ``case2``.  With ``auto`` the first
    regime whose range contains f(n) wins.  When f(n) lies in neither range
    (small n) a ``strict`` call raises OutOfRegime; otherwise the case-1
    graph is used if K_{t,t} fits in n vertices, else the case-2 graph, and
    the result is marked ``regime="fallback"``.
    """
    keys = sorted(f_values)
    for a, b in zip(keys, keys[1:]):
        if f_values[a] > f_values[b]:
            raise ValueError(f"f is not non-decreasing: f({a})={f_values[a]} > f({b})={f_values[b]}")
    if n not in f_values:
        raise ValueError(f"f({n}) not provided")
    fn = f_values[n]
    if fn < n:
        raise ValueError(f"need f(n) >= n, got f({n})={fn}")
    if variant not in ("auto", "case1", "case2"):
        raise ValueError(f"unknown variant {variant!r}")

    in1, in2 = case1_in_range(n, fn), case2_in_range(n, fn)
    if variant == "case1" or (variant == "auto" and in1):
        t = select_t_case1(fn, oracle)
        if 2 * t > n:
            raise OutOfRegime(f"K_{{{t},{t}}} does not fit in {n} vertices")
        return Construction(biclique_path_graph(t, n), "case1", t, "in_range" if in1 else "forced", fn,
                            [oracle.biclique(s) for s in range(1, t + 1)])
    if variant == "case2" or (variant == "auto" and in2):
        t = select_t_case2(fn, oracle)
        if t > n:
            raise OutOfRegime(f"K_{t} does not fit in {n} vertices")
        return Construction(clique_path_graph(t, n), "case2", t, "in_range" if in2 else "forced", fn,
                            [oracle.clique(s) for s in range(1, t + 1)])
    if strict:
        raise OutOfRegime(f"f({n})={fn} is in neither regime at n={n}")
    t1 = select_t_case1(fn, oracle)
    if 2 * t1 <= n:
        return Construction(biclique_path_graph(t1, n), "case1", t1, "fallback", fn,
                            [oracle.biclique(s) for s in range(1, t1 + 1)])
    t2 = select_t_case2(fn, oracle)
    if t2 <= n:
        return Construction(clique_path_graph(t2, n), "case2", t2, "fallback", fn,
                            [oracle.clique(s) for s in range(1, t2 + 1)])
    raise OutOfRegime(f"f({n})={fn}: neither K_{{{t1},{t1}}} nor K_{t2} fits in {n} vertices")


PRESETS = ("f=n", "f=2nlog2n", "f=2^{n/8}")


def preset_values(name: str, upto: int) -> dict[int, int]:
    """Integer-valued presets on ``1..upto`` (values rounded up)."""
    if name == "f=n":
        return {m: m for m in range(1, upto + 1)}
    if name == "f=2nlog2n":
        return {m: max(m, math.ceil(2 * m * math.log2(m))) if m > 1 else 1 for m in range(1, upto + 1)}
    if name == "f=2^{n/8}":
        return {m: max(m, math.ceil(2 ** (m / 8))) for m in range(1, upto + 1)}
    raise ValueError(f"unknown preset {name!r}")
