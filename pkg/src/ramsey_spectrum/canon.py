"""Canonical labelling of edge-coloured complete graphs.

A structure on ``n`` vertices is given as a list of *layers*; each layer is a
tuple of ``n`` symmetric bitmask rows.  A plain graph is one layer (its edges);
an r-colouring of K_n is ``r - 1`` layers (colour 0 is whatever is left over).

The search is the usual individualisation-refinement tree: refine the vertex
partition to an equitable one, branch on the first smallest non-singleton
cell, and keep the lexicographically largest leaf certificate.  Subtrees are
pruned by partial-trace comparison and by automorphisms discovered on the way.
"""
from __future__ import annotations

from itertools import permutations
from typing import Sequence

Layers = Sequence[Sequence[int]]


def _mask(cell: Sequence[int]) -> int:
    m = 0
    for v in cell:
        m |= 1 << v
    return m


def _refine(cells: list[list[int]], layers: Layers, splitters: list[int]) -> list[list[int]]:
    queue = list(splitters)
    total = sum(map(len, cells))
    while queue:
        w = queue.pop(0)
        out: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                key = tuple((layer[v] & w).bit_count() for layer in layers)
                groups.setdefault(key, []).append(v)
            if len(groups) == 1:
                out.append(cell)
                continue
            for key in sorted(groups):
                frag = groups[key]
                out.append(frag)
                queue.append(_mask(frag))
        cells = out
        if len(cells) == total:
            break
    return cells


def _certificate(lab: Sequence[int], layers: Layers) -> tuple[tuple[int, ...], ...]:
    pos = [0] * len(lab)
    for i, v in enumerate(lab):
        pos[v] = i
    cert = []
    for layer in layers:
        rows = []
        for v in lab:
            row = layer[v]
            r = 0
            while row:
                low = row & -row
                r |= 1 << pos[low.bit_length() - 1]
                row ^= low
            rows.append(r)
        cert.append(tuple(rows))
    return tuple(cert)


class _Orbits:
    """Union-find over vertices under a set of permutations."""

    def __init__(self, n: int, gens: list[tuple[int, ...]]):
        self.parent = list(range(n))
        for g in gens:
            for v, w in enumerate(g):
                self.union(v, w)

    def find(self, v: int) -> int:
        p = self.parent
        while p[v] != v:
            p[v] = p[p[v]]
            v = p[v]
        return v

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def canonical_labelling(
    n: int, layers: Layers, colours: Sequence[int] | None = None
) -> tuple[list[int], tuple, list[tuple[int, ...]]]:
    """Return ``(lab, cert, generators)``.

    ``lab[i]`` is the original vertex placed at canonical position ``i``;
    ``cert`` is the relabelled layer data (equal iff isomorphic); generators
    are automorphisms found during the search (not necessarily a full
    generating set of the automorphism group).  ``colours`` optionally gives
    an initial vertex colouring that isomorphisms must preserve.
    """
    if n == 0:
        return [], tuple(() for _ in layers), []
    if colours is None:
        cells = [list(range(n))]
    else:
        by: dict[int, list[int]] = {}
        for v in range(n):
            by.setdefault(colours[v], []).append(v)
        cells = [by[k] for k in sorted(by)]
    cells = _refine(cells, layers, [_mask(c) for c in cells])

    best: dict = {"key": None, "lab": None, "traces": None}
    gens: list[tuple[int, ...]] = []

    def leaf(cells: list[list[int]], traces: list) -> None:
        lab = [c[0] for c in cells]
        cert = _certificate(lab, layers)
        key = (tuple(traces), cert)
        if best["key"] is None or key > best["key"]:
            best["key"], best["lab"], best["traces"] = key, lab, list(traces)
        elif key == best["key"]:
            blab = best["lab"]
            g = [0] * n
            for i in range(n):
                g[blab[i]] = lab[i]
            gt = tuple(g)
            if any(gt[v] != v for v in range(n)):
                gens.append(gt)

    def search(cells: list[list[int]], traces: list, fixed: list[int]) -> None:
        bt = best["traces"]
        if bt is not None and traces < bt[: len(traces)]:
            return
        if len(cells) == n:
            leaf(cells, traces)
            return
        ti = min(range(len(cells)), key=lambda i: (len(cells[i]) if len(cells[i]) > 1 else n + 1, i))
        target = cells[ti]
        explored: list[int] = []
        seen = 0
        orbits = _Orbits(n, [])
        for v in target:
            if explored:
                while seen < len(gens):
                    g = gens[seen]
                    seen += 1
                    if all(g[f] == f for f in fixed):
                        for a, b in enumerate(g):
                            orbits.union(a, b)
                rv = orbits.find(v)
                if any(orbits.find(u) == rv for u in explored):
                    continue
            explored.append(v)
            rest = [u for u in target if u != v]
            child = cells[:ti] + [[v], rest] + cells[ti + 1:]
            child = _refine(child, layers, [1 << v])
            search(child, traces + [tuple(len(c) for c in child)], fixed + [v])

    search(cells, [tuple(len(c) for c in cells)], [])
    return best["lab"], best["key"][1], gens


def canonical_key(n: int, layers: Layers, colour_symmetric: bool = False) -> tuple:
    """Isomorphism-invariant key; with ``colour_symmetric`` also invariant
    under permuting the colours of an r-colouring given as ``r - 1`` layers."""
    if not colour_symmetric:
        return canonical_labelling(n, layers)[1]
    full = complete_layers(n, layers)
    best = None
    for perm in permutations(range(len(full))):
        cand = canonical_labelling(n, [full[p] for p in perm[1:]])[1]
        if best is None or cand < best:
            best = cand
    return best


def complete_layers(n: int, layers: Layers) -> list[tuple[int, ...]]:
    """Prepend the implicit colour-0 layer so every colour is explicit."""
    allmask = (1 << n) - 1
    zero = []
    for v in range(n):
        used = 0
        for layer in layers:
            used |= layer[v]
        zero.append(allmask & ~used & ~(1 << v))
    return [tuple(zero)] + [tuple(layer) for layer in layers]


def automorphism_generators(n: int, layers: Layers) -> list[tuple[int, ...]]:
    return canonical_labelling(n, layers)[2]
