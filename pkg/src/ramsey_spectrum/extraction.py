"""Constructive extraction of monochromatic structure from 2-coloured hosts.

Each extractor either returns a :class:`MonoEmbedding` of the target graph
or a :class:`StepFailure` whose payload can be re-checked against the host.
Both kinds carry a ``verify(c)`` method so callers never have to trust the
pipeline itself.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Union

from .colouring import BLUE, RED, EdgeColouring, colour_class
from .constructions import biclique_path_graph, clique_path_graph
from .graph import Embedding, Graph, complete_bipartite, find_embedding

MONO_PATH_TOO_SHORT = "MONO_PATH_TOO_SHORT"
RED_BICLIQUE_PRESENT = "RED_BICLIQUE_PRESENT"
TILE_SHORTFALL = "TILE_SHORTFALL"
CONNECTOR_MISSING = "CONNECTOR_MISSING"
CLIQUE_COVER_FAIL = "CLIQUE_COVER_FAIL"
ASSEMBLY_SHORTFALL = "ASSEMBLY_SHORTFALL"
STEPS = (MONO_PATH_TOO_SHORT, RED_BICLIQUE_PRESENT, TILE_SHORTFALL, CONNECTOR_MISSING,
         CLIQUE_COVER_FAIL, ASSEMBLY_SHORTFALL)


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def is_mono_path(c: EdgeColouring, colour: int, path: list[int]) -> bool:
    if len(set(path)) != len(path) or any(not 0 <= v < c.N for v in path):
        return False
    return all(c.colour(a, b) == colour for a, b in zip(path, path[1:]))


def is_mono_clique(c: EdgeColouring, colour: int, vs: list[int]) -> bool:
    if len(set(vs)) != len(vs) or any(not 0 <= v < c.N for v in vs):
        return False
    return all(c.colour(vs[i], vs[j]) == colour for i in range(len(vs)) for j in range(i + 1, len(vs)))


def is_mono_biclique(c: EdgeColouring, colour: int, A: list[int], B: list[int]) -> bool:
    vs = list(A) + list(B)
    if len(set(vs)) != len(vs) or any(not 0 <= v < c.N for v in vs):
        return False
    return all(c.colour(a, b) == colour for a in A for b in B)


@dataclass(frozen=True)
class MonoEmbedding:
    colour: int
    embedding: Embedding
    pattern: Graph

    def verify(self, c: EdgeColouring) -> bool:
        return self.embedding.is_valid(colour_class(c, self.colour), self.pattern)

    def to_record(self) -> dict:
        from .graph import write_graph6

        return {"kind": "embedding", "colour": self.colour, "pattern": write_graph6(self.pattern),
                "map": list(self.embedding.map)}


@dataclass(frozen=True)
class StepFailure:
    """A pipeline step that could not complete, with a checkable reason.

    Payload keys by step:

    * ``MONO_PATH_TOO_SHORT``: ``colour``, ``path``, ``n`` (the path has at most n vertices)
    * ``RED_BICLIQUE_PRESENT`` / ``CONNECTOR_MISSING``: ``colour``, ``A``, ``B``
    * ``TILE_SHORTFALL``: ``colour``, ``tiles`` (vertex lists), ``n``
    * ``CLIQUE_COVER_FAIL``: ``colour``, ``reps`` (a clique in ``colour``) or
      ``clique`` and ``used`` when no free representative exists
    * ``ASSEMBLY_SHORTFALL``: ``colour``, ``cliques``, ``links``, ``t``, ``n``
    """

    step: str
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.step not in STEPS:
            raise ValueError(f"unknown step {self.step!r}")

    def verify(self, c: EdgeColouring) -> bool:
        p = self.payload
        if self.step == MONO_PATH_TOO_SHORT:
            return len(p["path"]) <= p["n"] and is_mono_path(c, p["colour"], p["path"])
        if self.step in (RED_BICLIQUE_PRESENT, CONNECTOR_MISSING):
            return len(p["A"]) == len(p["B"]) >= 1 and is_mono_biclique(c, p["colour"], p["A"], p["B"])
        if self.step == TILE_SHORTFALL:
            tiles = p["tiles"]
            flat = [v for tile in tiles for v in tile]
            return len(flat) == len(set(flat)) and len(flat) < p["n"]
        if self.step == CLIQUE_COVER_FAIL:
            if "reps" in p:
                return len(p["reps"]) >= 2 and is_mono_clique(c, p["colour"], p["reps"])
            return set(p["clique"]) <= set(p["used"])
        if self.step == ASSEMBLY_SHORTFALL:
            cp = CliquePath([tuple(q) for q in p["cliques"]], [tuple(e) for e in p["links"]], 1 - p["colour"])
            return cp.check(c) and len(cp.cliques) * p["t"] < p["n"]
        return False

    def to_record(self) -> dict:
        return {"kind": "failure", "failure": self.step, "payload": self.payload}


Outcome = Union[MonoEmbedding, StepFailure]


def verify_outcome(c: EdgeColouring, out: Outcome) -> bool:
    return out.verify(c)


# -- long monochromatic paths -------------------------------------------------


def _rotate_extend(rows: list[int], start: int, rng: random.Random, target: int, max_rot: int) -> list[int]:
    """Greedy path growth with end rotations; returns the longest path seen."""
    path = [start]
    inpath = 1 << start
    best = list(path)
    rotations = 0
    while True:
        end = path[-1]
        free = rows[end] & ~inpath
        if free:
            # prefer the free neighbour with fewest free neighbours of its own
            cands = [x for x in range(len(rows)) if free >> x & 1]
            x = min(cands, key=lambda y: ((rows[y] & ~inpath).bit_count(), y))
            path.append(x)
            inpath |= 1 << x
            if len(path) > len(best):
                best = list(path)
            if len(path) >= target:
                return path
            continue
        if rows[path[0]] & ~inpath:
            path.reverse()
            continue
        if rotations >= max_rot:
            return best
        pivots = [i for i in range(len(path) - 2) if rows[end] >> path[i] & 1]
        if not pivots:
            return best
        good = [i for i in pivots if rows[path[i + 1]] & ~inpath]
        i = rng.choice(good or pivots)
        path[i + 1 :] = path[i + 1 :][::-1]
        rotations += 1


def _exact_path(rows: list[int], N: int, target: int) -> Optional[list[int]]:
    """Exhaustive search for a path on ``target`` vertices."""

    def reach(v: int, avail: int) -> int:
        seen = 1 << v
        frontier = seen
        while frontier:
            nxt = 0
            for x in range(N):
                if frontier >> x & 1:
                    nxt |= rows[x] & avail
            nxt &= ~seen
            seen |= nxt
            frontier = nxt
        return seen.bit_count()

    path: list[int] = []

    def dfs(v: int, used: int) -> bool:
        path.append(v)
        if len(path) >= target:
            return True
        avail = ((1 << N) - 1) & ~used
        if len(path) - 1 + reach(v, avail) >= target:
            cand = rows[v] & avail
            while cand:
                low = cand & -cand
                cand ^= low
                if dfs(low.bit_length() - 1, used | low):
                    return True
        path.pop()
        return False

    for s in range(N):
        if dfs(s, 1 << s):
            return path
    return None


def _path_in(rows: list[int], N: int, target: int, seed: int) -> list[int]:
    rng = random.Random(seed)
    best = [0]
    for attempt in range(4):
        start = 0 if attempt == 0 else rng.randrange(N)
        p = _rotate_extend(rows, start, rng, N, 4 * N)
        if len(p) > len(best):
            best = p
        if len(best) >= target:
            break
    return best


def find_long_mono_path(c: EdgeColouring, seed: int = 0) -> tuple[int, list[int]]:
    """A monochromatic path on at least ceil(2N/3) vertices.

    Rotation-extension runs in each colour with identical random draws; if
    neither reaches the target an exhaustive search settles it.  Ties go to
    the lexicographically smaller vertex sequence, never to a colour index,
    so swapping the colours of ``c`` only swaps the returned colour.
    """
    if c.r != 2:
        raise ValueError("needs a 2-colouring")
    N = c.N
    if N < 2:
        raise ValueError("needs N >= 2")
    target = -(-2 * N // 3)
    found = [(colour, _path_in(list(c.rows[colour]), N, target, seed)) for colour in (RED, BLUE)]
    if all(len(p) < target for _, p in found):
        found = [(colour, _exact_path(list(c.rows[colour]), N, target) or [0]) for colour in (RED, BLUE)]
    colour, path = min(found, key=lambda cp: (-len(cp[1]), cp[1]))
    if len(path) < target or not is_mono_path(c, colour, path):
        raise RuntimeError(f"no monochromatic path on {target} vertices found; this is a bug")
    return colour, path


# -- tiling and stitching --------------------------------------------------------


def greedy_mono_tiling(c: EdgeColouring, S: Iterable[int], pattern: Graph, colour: int) -> list[Embedding]:
    """Repeatedly take the lexicographically least ``colour`` copy of
    ``pattern`` among the still uncovered vertices of ``S``."""
    host = colour_class(c, colour)
    free = _mask(S)
    tiles = []
    while True:
        emb = find_embedding(host, pattern, within=free)
        if emb is None or pattern.n == 0:
            return tiles
        tiles.append(emb)
        free &= ~_mask(emb.map)


def _trail_before(seq: list[int], k: int) -> list[int]:
    """The ``k`` vertices preceding the last entry of ``seq``, nearest first."""
    return seq[-2 : -2 - k : -1] if k else []


def stitch_case1(c: EdgeColouring, tiles: list[Embedding], t: int, n: int, colour: int = BLUE) -> Outcome:
    """Thread a ``colour`` path through the tiles and finish on the last one.

    Tiles are embeddings of K_{t,t} with class A the first t entries.  The
    path runs a_1 .. b_1 -> a_2 .. b_2 -> ... -> a_s, and the last tile
    becomes the biclique of the target with a_s as its attachment vertex.
    """
    covered = sum(len(e.map) for e in tiles)
    if not tiles or covered < n:
        return StepFailure(TILE_SHORTFALL, {"colour": colour, "tiles": [list(e.map) for e in tiles], "n": n})
    classes = [(list(e.map[:t]), list(e.map[t:])) for e in tiles]
    entry = classes[0][0][0]
    seq: list[int] = []
    for i in range(len(classes) - 1):
        A, B = classes[i]
        A2 = classes[i + 1][0]
        link = next(((b, a) for b in B for a in A2 if c.colour(b, a) == colour), None)
        if link is None:
            return StepFailure(CONNECTOR_MISSING, {"colour": 1 - colour, "A": B, "B": A2})
        b, a_next = link
        # spanning path of the tile from entry (in A) to b (in B)
        As = [entry] + [x for x in A if x != entry]
        Bs = [x for x in B if x != b] + [b]
        for x, y in zip(As, Bs):
            seq += [x, y]
        entry = a_next
    A, B = classes[-1]
    seq.append(entry)
    pattern = biclique_path_graph(t, n)
    tail = _trail_before(seq, n - 2 * t)
    if len(tail) < n - 2 * t:
        return StepFailure(TILE_SHORTFALL, {"colour": colour, "tiles": [list(e.map) for e in tiles], "n": n})
    A_order = [entry] + [x for x in A if x != entry]
    emb = MonoEmbedding(colour, Embedding(tuple(A_order + B + tail)), pattern)
    return emb


def _shortcut(c: EdgeColouring, colour: int, path: list[int], core: list[int], base_order: list[int],
              pattern: Graph, base_n: int, n: int) -> MonoEmbedding:
    """Attach a pendant path to ``core`` running back along ``path`` from the
    core vertex that appears first on it.  ``base_order`` lists the core
    vertices in pattern order, starting with the attachment vertex."""
    pos = {v: i for i, v in enumerate(path)}
    first = base_order[0]
    tail = path[pos[first] - 1 :: -1][: n - base_n] if pos[first] > 0 else []
    return MonoEmbedding(colour, Embedding(tuple(base_order + tail)), pattern)


def extract_case1(c: EdgeColouring, t: int, n: int, shortcut: bool = True, seed: int = 0,
                  trace: Optional[list] = None) -> Outcome:
    """Monochromatic copy of the biclique-plus-path graph, or a certified failure.

    The long path's colour plays the role of red.  If the path minus its
    first ``n`` vertices holds a copy of K_{t,t} in that colour, the copy and
    the trimmed prefix give the answer directly; otherwise the other colour
    is tiled with K_{t,t} and the tiles are stitched.
    """
    if c.r != 2:
        raise ValueError("needs a 2-colouring")
    if t < 1 or n < 2 * t:
        raise ValueError("need n >= 2t >= 2")
    trace = trace if trace is not None else []
    colour, path = find_long_mono_path(c, seed)
    other = 1 - colour
    trace.append({"step": "mono_path", "colour": colour, "path": path})
    if len(path) <= n:
        return StepFailure(MONO_PATH_TOO_SHORT, {"colour": colour, "path": path, "n": n})
    S = path[n:]
    trace.append({"step": "trim", "S": S})
    pattern = biclique_path_graph(t, n)
    bic = complete_bipartite(t, t)
    red = find_embedding(colour_class(c, colour), bic, within=_mask(S))
    if red is not None:
        A, B = list(red.map[:t]), list(red.map[t:])
        if not shortcut:
            return StepFailure(RED_BICLIQUE_PRESENT, {"colour": colour, "A": A, "B": B})
        pos = {v: i for i, v in enumerate(path)}
        first = min(A + B, key=pos.__getitem__)
        if first in B:
            A, B = B, A
        order = [first] + [x for x in A if x != first] + B
        out = _shortcut(c, colour, path, A + B, order, pattern, 2 * t, n)
        trace.append({"step": "shortcut", "A": A, "B": B})
        return out
    tiles = greedy_mono_tiling(c, S, bic, other)
    trace.append({"step": "tiling", "tiles": [list(e.map) for e in tiles]})
    out = stitch_case1(c, tiles, t, n, other)
    trace.append({"step": "stitch", **out.to_record()})
    return out


# -- clique paths ----------------------------------------------------------------


@dataclass
class CliquePath:
    """Disjoint cliques in ``colour`` with one ``colour`` link edge
    ``(x_i, y_{i+1})`` from clique i to clique i+1; links are vertex-disjoint."""

    cliques: list[tuple[int, ...]]
    links: list[tuple[int, int]]
    colour: int = BLUE

    def check(self, c: EdgeColouring) -> bool:
        return all(self.violations(c)[k] is None for k in ("disjoint", "cliques", "links", "link_disjoint"))

    def violations(self, c: EdgeColouring) -> dict[str, Any]:
        """One entry per invariant, None when it holds."""
        out: dict[str, Any] = {"disjoint": None, "cliques": None, "links": None, "link_disjoint": None}
        flat = [v for q in self.cliques for v in q]
        if len(flat) != len(set(flat)):
            out["disjoint"] = "cliques overlap"
        for q in self.cliques:
            if not is_mono_clique(c, self.colour, list(q)):
                out["cliques"] = q
                break
        if len(self.links) != max(len(self.cliques) - 1, 0):
            out["links"] = "wrong number of links"
        else:
            for i, (x, y) in enumerate(self.links):
                if x not in self.cliques[i] or y not in self.cliques[i + 1] or c.colour(x, y) != self.colour:
                    out["links"] = (x, y)
                    break
        ends = [v for e in self.links for v in e]
        if len(ends) != len(set(ends)):
            out["link_disjoint"] = "links share a vertex"
        return out

    def reversed(self) -> "CliquePath":
        return CliquePath(self.cliques[::-1], [(y, x) for x, y in self.links[::-1]], self.colour)

    @property
    def num_vertices(self) -> int:
        return sum(len(q) for q in self.cliques)


def _free_rep(cp: CliquePath) -> Optional[int]:
    """Least vertex of the last clique that no link uses."""
    used = {v for e in cp.links for v in e}
    return next((v for v in sorted(cp.cliques[-1]) if v not in used), None)


def cover_by_clique_paths(c: EdgeColouring, cliques: list, t: int, colour: int = BLUE) -> Union[list[CliquePath], StepFailure]:
    """Merge singleton clique-paths until at most t-1 remain.

    While too many paths remain, the first t are taken, a free vertex is
    chosen in the last clique of each, and the first ``colour`` pair among
    those representatives (lexicographic over index pairs) merges path i
    with the reversal of path j.  An end clique has at most one link
    endpoint, so for t >= 2 a free representative always exists.  If every
    representative pair has the other colour, the representatives are a
    K_t in that colour and are returned as the failure certificate.
    """
    if t < 2:
        return StepFailure(CLIQUE_COVER_FAIL, {"colour": 1 - colour, "clique": [], "used": [], "t": t})
    paths = [CliquePath([tuple(sorted(q))], [], colour) for q in cliques]
    while len(paths) > t - 1:
        group = paths[:t]
        reps = []
        for cp in group:
            q = _free_rep(cp)
            if q is None:
                used = sorted({v for e in cp.links for v in e} & set(cp.cliques[-1]))
                return StepFailure(CLIQUE_COVER_FAIL, {"colour": 1 - colour, "clique": list(cp.cliques[-1]),
                                                       "used": used})
            reps.append(q)
        pair = next(((i, j) for i in range(t) for j in range(i + 1, t)
                     if c.colour(reps[i], reps[j]) == colour), None)
        if pair is None:
            return StepFailure(CLIQUE_COVER_FAIL, {"colour": 1 - colour, "reps": reps})
        i, j = pair
        a, b = group[i], group[j].reversed()
        merged = CliquePath(a.cliques + b.cliques, a.links + [(reps[i], reps[j])] + b.links, colour)
        paths[i] = merged
        del paths[j]
    return paths


def _realize_clique_path(cp: CliquePath, t: int, n: int) -> MonoEmbedding:
    """Blue K_t on the last clique plus a path back through earlier cliques."""
    seq: list[int] = []
    entry: Optional[int] = None
    for i, q in enumerate(cp.cliques[:-1]):
        x = cp.links[i][0]
        inner = [v for v in q if v != x and v != entry]
        seq += ([entry] if entry is not None else []) + inner + [x]
        entry = cp.links[i][1]
    last = cp.cliques[-1]
    first = entry if entry is not None else last[0]
    seq.append(first)
    order = [first] + [v for v in last if v != first]
    tail = _trail_before(seq, n - t)
    return MonoEmbedding(cp.colour, Embedding(tuple(order + tail)), clique_path_graph(t, n))


def extract_case2(c: EdgeColouring, t: int, n: int, shortcut: bool = True, seed: int = 0,
                  trace: Optional[list] = None) -> Outcome:
    """Monochromatic copy of the clique-plus-path graph, or a certified failure."""
    if c.r != 2:
        raise ValueError("needs a 2-colouring")
    if t < 1 or n < t:
        raise ValueError("need n >= t >= 1")
    trace = trace if trace is not None else []
    colour, path = find_long_mono_path(c, seed)
    other = 1 - colour
    trace.append({"step": "mono_path", "colour": colour, "path": path})
    if len(path) <= n:
        return StepFailure(MONO_PATH_TOO_SHORT, {"colour": colour, "path": path, "n": n})
    S = path[n:]
    trace.append({"step": "trim", "S": S})
    pattern = clique_path_graph(t, n)
    kt = Graph.complete(t)
    red = find_embedding(colour_class(c, colour), kt, within=_mask(S))
    if red is not None and shortcut:
        pos = {v: i for i, v in enumerate(path)}
        Q = list(red.map)
        first = min(Q, key=pos.__getitem__)
        order = [first] + [x for x in Q if x != first]
        trace.append({"step": "shortcut", "clique": Q})
        return _shortcut(c, colour, path, Q, order, pattern, t, n)
    if t == 1:
        # K_1 plus a path is a path; the mono path itself suffices
        return MonoEmbedding(colour, Embedding(tuple(path[:n][::-1])), pattern)
    tiles = greedy_mono_tiling(c, S, kt, other)
    trace.append({"step": "tiling", "tiles": [list(e.map) for e in tiles]})
    cover = cover_by_clique_paths(c, [list(e.map) for e in tiles], t, other)
    if isinstance(cover, StepFailure):
        trace.append({"step": "cover", **cover.to_record()})
        return cover
    trace.append({"step": "cover", "paths": [[list(q) for q in cp.cliques] for cp in cover]})
    if not cover:
        return StepFailure(ASSEMBLY_SHORTFALL, {"colour": colour, "cliques": [], "links": [], "t": t, "n": n})
    best = max(cover, key=lambda cp: len(cp.cliques))
    if best.num_vertices < n:
        return StepFailure(ASSEMBLY_SHORTFALL, {"colour": colour, "cliques": [list(q) for q in best.cliques],
                                                "links": [list(e) for e in best.links], "t": t, "n": n})
    out = _realize_clique_path(best, t, n)
    trace.append({"step": "assemble", **out.to_record()})
    return out


def trace_to_text(trace: list) -> str:
    return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in trace)
