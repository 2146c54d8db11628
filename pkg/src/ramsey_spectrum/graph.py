"""Dense bit-matrix graphs and the small-graph toolkit built on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .canon import canonical_labelling

MAX_N = 64


class Graph6Error(ValueError):
    """Base class for graph6 parse failures."""


class Graph6HeaderError(Graph6Error):
    pass


class Graph6TruncatedError(Graph6Error):
    pass


class Graph6SizeError(Graph6Error):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``rows[v]`` is the neighbourhood of ``v`` as a bitmask.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_N:
            raise ValueError(f"graph order {self.n} outside [0, {MAX_N}]")
        if len(self.rows) != self.n:
            raise ValueError("row count does not match n")
        for u, row in enumerate(self.rows):
            if row >> self.n:
                raise ValueError(f"row {u} references a vertex >= n")
            if row >> u & 1:
                raise ValueError(f"loop at vertex {u}")
            r = row
            while r:
                low = r & -r
                v = low.bit_length() - 1
                if not self.rows[v] >> u & 1:
                    raise ValueError(f"asymmetric adjacency at ({u}, {v})")
                r ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.rows[u] >> v & 1]

    @cached_property
    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~r & ~(1 << v) for v, r in enumerate(self.rows)))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph in which vertex ``v`` is renamed ``perm[v]``."""
        rows = [0] * self.n
        for u, v in self.edges():
            rows[perm[u]] |= 1 << perm[v]
            rows[perm[v]] |= 1 << perm[u]
        return Graph(self.n, tuple(rows))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        idx = {v: i for i, v in enumerate(vertices)}
        return Graph.from_edges(
            len(vertices),
            [(idx[u], idx[v]) for u in vertices for v in vertices if u < v and self.rows[u] >> v & 1],
        )

    def isolated_vertices(self) -> list[int]:
        return [v for v in range(self.n) if self.rows[v] == 0]

    def without_isolated(self) -> "Graph":
        return self.induced([v for v in range(self.n) if self.rows[v]])

    def components(self) -> list[list[int]]:
        seen = 0
        comps = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp = 1 << s
            frontier = comp
            while frontier:
                nxt = 0
                f = frontier
                while f:
                    low = f & -f
                    nxt |= self.rows[low.bit_length() - 1]
                    f ^= low
                frontier = nxt & ~comp
                comp |= nxt
            seen |= comp
            comps.append([v for v in range(self.n) if comp >> v & 1])
        return comps

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, g6={write_graph6(self)!r})"


@dataclass(frozen=True)
class Embedding:
    """Injective map pattern-vertex -> host-vertex (``map[u]``)."""

    map: tuple[int, ...]

    def is_valid(self, host: Graph, pattern: Graph) -> bool:
        if len(self.map) != pattern.n or len(set(self.map)) != pattern.n:
            return False
        if any(not 0 <= x < host.n for x in self.map):
            return False
        return all(host.has_edge(self.map[u], self.map[v]) for u, v in pattern.edges())


# -- graph6 -----------------------------------------------------------------


def write_graph6(g: Graph) -> str:
    if g.n > 62:
        # 63..64 need the 4-byte size prefix
        head = chr(126) + "".join(chr(63 + (g.n >> s & 63)) for s in (12, 6, 0))
    else:
        head = chr(63 + g.n)
    bits = [1 if g.rows[i] >> j & 1 else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = "".join(
        chr(63 + int("".join(map(str, bits[k : k + 6])), 2)) for k in range(0, len(bits), 6)
    )
    return head + body


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s:
        raise Graph6HeaderError("empty graph6 string")
    if any(not 63 <= ord(ch) <= 126 for ch in s):
        raise Graph6HeaderError(f"character outside graph6 range in {text!r}")
    if s[0] == "~":
        if len(s) >= 2 and s[1] == "~":
            raise Graph6SizeError("8-byte graph6 size header exceeds the 64-vertex cap")
        if len(s) < 4:
            raise Graph6HeaderError("truncated 4-byte size header")
        n = 0
        for ch in s[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        body = s[4:]
    else:
        n = ord(s[0]) - 63
        body = s[1:]
    if n > MAX_N:
        raise Graph6SizeError(f"graph6 order {n} exceeds {MAX_N}")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(body) < need:
        raise Graph6TruncatedError(f"expected {need} payload bytes, got {len(body)}")
    if len(body) > need:
        raise Graph6HeaderError(f"{len(body) - need} trailing bytes after payload")
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(body[k // 6]) - 63
            if byte >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph(n, tuple(rows))


# -- structure ----------------------------------------------------------------


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(g.components()) == 1


def clique_number(g: Graph) -> int:
    best = 0

    def grow(size: int, cand: int) -> None:
        nonlocal best
        if size > best:
            best = size
        while cand:
            if size + cand.bit_count() <= best:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            grow(size + 1, cand & g.rows[v])

    grow(0, (1 << g.n) - 1)
    return best


def chromatic_number(g: Graph, max_nodes: int | None = None) -> int | None:
    """Exact chromatic number by DSATUR branch and bound.

    Returns ``None`` if ``max_nodes`` search nodes are exhausted first.
    """
    n = g.n
    if n == 0:
        return 0
    if g.num_edges == 0:
        return 1
    lower = clique_number(g)
    colour = [-1] * n
    # greedy DSATUR upper bound
    best = _dsatur_greedy(g)
    if best == lower:
        return best
    nodes = 0

    def pick() -> int:
        bestv, bestkey = -1, None
        for v in range(n):
            if colour[v] >= 0:
                continue
            sat = len({colour[u] for u in _bits(g.rows[v]) if colour[u] >= 0})
            key = (sat, g.degree(v), -v)
            if bestkey is None or key > bestkey:
                bestv, bestkey = v, key
        return bestv

    def solve(coloured: int, used: int) -> bool:
        nonlocal best, nodes
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise _Budget
        if used >= best:
            return False
        if coloured == n:
            best = used
            return best == lower
        v = pick()
        forbidden = {colour[u] for u in _bits(g.rows[v]) if colour[u] >= 0}
        for c in range(min(used + 1, best - 1)):
            if c in forbidden:
                continue
            colour[v] = c
            if solve(coloured + 1, max(used, c + 1)):
                return True
            colour[v] = -1
        return False

    try:
        solve(0, 0)
    except _Budget:
        return None
    return best


class _Budget(Exception):
    pass


def _dsatur_greedy(g: Graph) -> int:
    colour = [-1] * g.n
    for _ in range(g.n):
        bestv, bestkey = -1, None
        for v in range(g.n):
            if colour[v] < 0:
                sat = len({colour[u] for u in _bits(g.rows[v]) if colour[u] >= 0})
                key = (sat, g.degree(v), -v)
                if bestkey is None or key > bestkey:
                    bestv, bestkey = v, key
        forbidden = {colour[u] for u in _bits(g.rows[bestv])}
        c = 0
        while c in forbidden:
            c += 1
        colour[bestv] = c
    return max(colour) + 1


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- isomorphism ------------------------------------------------------------


def canonical_form(g: Graph) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic."""
    lab, cert, _ = canonical_labelling(g.n, [g.rows])
    width = (g.n + 7) // 8
    return bytes([g.n]) + b"".join(r.to_bytes(width, "little") for r in cert[0])


def canonical_graph(g: Graph) -> Graph:
    lab, cert, _ = canonical_labelling(g.n, [g.rows])
    return Graph(g.n, cert[0])


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.num_edges == h.num_edges and canonical_form(g) == canonical_form(h)


ENUM_FILTERS = ("all", "connected", "no_isolated")


def enumerate_graphs(n: int, filter: str = "all") -> Iterator[Graph]:
    """One graph per isomorphism class on ``n`` vertices.

    Classes are grown one vertex at a time from the classes on ``n - 1``
    vertices and deduplicated by canonical form; output order is the
    canonical-form byte order, so it does not depend on generation order.
    """
    if not 1 <= n <= 8:
        raise ValueError(f"enumerate_graphs supports 1 <= n <= 8, got {n}")
    if filter not in ENUM_FILTERS:
        raise ValueError(f"unknown filter {filter!r}")
    for g in _classes(n):
        if filter == "connected" and not is_connected(g):
            continue
        if filter == "no_isolated" and g.isolated_vertices():
            continue
        yield g


_CLASS_CACHE: dict[int, list[Graph]] = {}


def _classes(n: int) -> list[Graph]:
    if n in _CLASS_CACHE:
        return _CLASS_CACHE[n]
    if n == 1:
        out = [Graph.empty(1)]
    else:
        seen: dict[bytes, Graph] = {}
        for parent in _classes(n - 1):
            for nbrs in range(1 << (n - 1)):
                rows = list(parent.rows) + [nbrs]
                for u in _bits(nbrs):
                    rows[u] |= 1 << (n - 1)
                child = Graph(n, tuple(rows))
                lab, cert, _ = canonical_labelling(n, [child.rows])
                key = cert[0]
                if key not in seen:
                    seen[key] = Graph(n, key)
        out = [seen[k] for k in sorted(seen, key=lambda k: canonical_form(seen[k]))]
    _CLASS_CACHE[n] = out
    return out


# -- subgraph embedding ---------------------------------------------------------


def find_embedding(host: Graph, pattern: Graph, within: int | None = None) -> Embedding | None:
    """Lexicographically least embedding of ``pattern`` as a (not necessarily
    induced) subgraph of ``host``, restricted to host vertices in the bitmask
    ``within`` when given."""
    k = pattern.n
    allowed = (1 << host.n) - 1 if within is None else within & ((1 << host.n) - 1)
    if k > allowed.bit_count():
        return None
    if k == 0:
        return Embedding(())
    prows = pattern.rows
    hrows = [r & allowed for r in host.rows]
    pdeg = [r.bit_count() for r in prows]
    hdeg_ok = [0] * (max(pdeg) + 1)
    for d in range(len(hdeg_ok)):
        m = 0
        for v in _bits(allowed):
            if hrows[v].bit_count() >= d:
                m |= 1 << v
        hdeg_ok[d] = m
    earlier = [[w for w in _bits(prows[u]) if w < u] for u in range(k)]
    later = [[w for w in _bits(prows[u]) if w > u] for u in range(k)]
    mapping = [-1] * k

    def candidates(u: int, used: int) -> int:
        c = hdeg_ok[pdeg[u]] & ~used
        for w in earlier[u]:
            c &= hrows[mapping[w]]
        return c

    def extend(u: int, used: int) -> bool:
        if u == k:
            return True
        c = candidates(u, used)
        while c:
            low = c & -c
            c ^= low
            x = low.bit_length() - 1
            mapping[u] = x
            nused = used | low
            # forward check: every later neighbour still has somewhere to go
            ok = True
            for w in later[u]:
                cw = hdeg_ok[pdeg[w]] & ~nused
                for p in earlier[w]:
                    if p <= u:
                        cw &= hrows[mapping[p]]
                if not cw:
                    ok = False
                    break
            if ok and extend(u + 1, nused):
                return True
        mapping[u] = -1
        return False

    if extend(0, 0):
        return Embedding(tuple(mapping))
    return None


# -- small named graphs -----------------------------------------------------


def path_graph(v: int) -> Graph:
    return Graph.from_edges(v, [(i, i + 1) for i in range(v - 1)])


def cycle_graph(v: int) -> Graph:
    return Graph.from_edges(v, [(i, (i + 1) % v) for i in range(v)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star_graph(k: int) -> Graph:
    return complete_bipartite(1, k)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    off = 0
    for g in graphs:
        edges += [(u + off, v + off) for u, v in g.edges()]
        off += g.n
    return Graph.from_edges(off, edges)
