"""Witness colourings behind lower bounds on Ramsey numbers."""
from __future__ import annotations

import random
from typing import TYPE_CHECKING

from .colouring import GREEN, EdgeColouring, random_colouring
from .engine import find_mono_copy
from .graph import Graph, chromatic_number, complete_bipartite, find_embedding, is_connected

if TYPE_CHECKING:
    from .constructions import RamseyOracle


def verify_no_mono(c: EdgeColouring, g: Graph) -> bool:
    return find_mono_copy(c, g) is None


def random_biclique_witness(t: int, N: int, seed: int, max_tries: int = 1000) -> EdgeColouring | None:
    """First of ``max_tries`` seeded uniform 2-colourings of K_N with no
    monochromatic K_{t,t}, or None."""
    if t < 1 or N < 1:
        raise ValueError("need t >= 1 and N >= 1")
    pattern = complete_bipartite(t, t)
    rng = random.Random(seed)
    for _ in range(max_tries):
        c = random_colouring(N, 2, rng.getrandbits(64))
        if verify_no_mono(c, pattern):
            return c
    return None


def blocked_3colouring(h_witness: EdgeColouring, chi_h: int) -> EdgeColouring:
    """``chi_h - 1`` disjoint copies of a 2-coloured witness, every cross pair green."""
    if chi_h < 2:
        raise ValueError("chi_h must be at least 2")
    if h_witness.r != 2:
        raise ValueError("block colouring must use two colours")
    M = h_witness.N
    N = (chi_h - 1) * M

    def col(i: int, j: int) -> int:
        if i // M == j // M:
            return h_witness.colour(i % M, j % M)
        return GREEN

    return EdgeColouring.from_function(N, 3, col)


def r3_lower_bound(g: Graph, h: Graph, oracle: "RamseyOracle") -> tuple[int, EdgeColouring]:
    """Three-colour lower bound for ``g`` from a connected subgraph ``h``.

    Returns ``((chi(h)-1)*(R(h)-1) + 1, witness)`` where the witness is a
    3-colouring on one vertex fewer with no monochromatic ``g``.
    """
    if not is_connected(h):
        raise ValueError("h must be connected")
    if find_embedding(g, h) is None:
        raise ValueError("h is not a subgraph of g")
    res = oracle.graph(h)
    chi = chromatic_number(h)
    witness = blocked_3colouring(res.witness, chi)
    if not verify_no_mono(witness, g):
        raise AssertionError("blocked colouring contains the target")
    return (chi - 1) * (res.value - 1) + 1, witness


# -- heuristic witness search ---------------------------------------------------


def circulant_colouring(N: int, red_distances: set[int]) -> EdgeColouring:
    def col(i: int, j: int) -> int:
        d = (j - i) % N
        return 0 if min(d, N - d) in red_distances else 1

    return EdgeColouring.from_function(N, 2, col)


def search_witness(
    pattern: Graph,
    N: int,
    seed: int = 0,
    max_circulants: int = 4096,
    restarts: int = 4,
    steps: int = 500,
) -> EdgeColouring | None:
    """Look for a 2-colouring of K_N without a monochromatic ``pattern``.

    Circulant colourings come first (all of them when there are at most
    ``max_circulants``, otherwise a seeded sample), then seeded random
    restarts of a recolouring walk that flips an edge of some monochromatic
    copy.  Every returned colouring has been checked with ``find_mono_copy``.
    """
    if N < pattern.n:
        return EdgeColouring.monochromatic(N)
    rng = random.Random(seed)
    D = N // 2
    if D:
        if 2**D <= max_circulants:
            masks = list(range(2**D))
            rng.shuffle(masks)
        else:
            masks = [rng.getrandbits(D) for _ in range(max_circulants)]
        for mask in masks:
            c = circulant_colouring(N, {d + 1 for d in range(D) if mask >> d & 1})
            if verify_no_mono(c, pattern):
                return c
    for _ in range(restarts):
        col = bytearray(random_colouring(N, 2, rng.getrandbits(64)).col)
        for _ in range(steps):
            c = EdgeColouring(N, 2, bytes(col))
            hit = find_mono_copy(c, pattern)
            if hit is None:
                return c
            _, emb = hit
            u, v = rng.choice(pattern.edges())
            a, b = emb.map[u], emb.map[v]
            if a > b:
                a, b = b, a
            col[b * (b - 1) // 2 + a] ^= 1
    return None


def improve_lower_bound(
    pattern: Graph, lo: int, seed: int = 0, patience: int = 5, **kwargs
) -> tuple[int, EdgeColouring | None]:
    """Largest lower bound reachable by ``search_witness`` from ``lo`` upward.

    A witness on K_M also certifies every smaller host, so failures are
    skipped; the scan stops after ``patience`` consecutive misses.
    """
    witness = None
    misses = 0
    N = lo
    while misses < patience:
        w = search_witness(pattern, N, seed=seed, **kwargs)
        if w is None:
            misses += 1
        else:
            witness, lo, misses = w, N + 1, 0
        N += 1
    return lo, witness
