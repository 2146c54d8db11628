"""Edge colourings of complete graphs.

Colour 0 is red, 1 is blue and 2 is green.  Pair colours are stored flat in
colex order: pair ``{i, j}`` with ``i < j`` sits at ``j*(j-1)//2 + i``, which
is also the order of the text format (row ``j`` lists ``{0,j} .. {j-1,j}``).

Random colourings draw from CPython's ``random.Random`` (MT19937) via
``getrandbits`` only, whose output for an integer seed is fixed across
platforms and Python versions.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .graph import MAX_N, Graph

RED, BLUE, GREEN = 0, 1, 2
COLOUR_NAMES = ("red", "blue", "green")
PRNG_NAME = "MT19937 (CPython random.Random, getrandbits)"


class ColouringFormatError(ValueError):
    pass


def pair_index(i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


@dataclass(frozen=True)
class EdgeColouring:
    N: int
    r: int
    col: bytes

    def __post_init__(self):
        if not 0 <= self.N <= MAX_N:
            raise ValueError(f"host order {self.N} outside [0, {MAX_N}]")
        if not 2 <= self.r <= 3:
            raise ValueError(f"r must be 2 or 3, got {self.r}")
        if len(self.col) != self.N * (self.N - 1) // 2:
            raise ValueError("colour array length does not match N")
        if any(c >= self.r for c in self.col):
            raise ValueError("colour index out of range")

    @classmethod
    def from_function(cls, N: int, r: int, fn) -> "EdgeColouring":
        return cls(N, r, bytes(fn(i, j) for j in range(N) for i in range(j)))

    @classmethod
    def monochromatic(cls, N: int, colour: int = RED, r: int = 2) -> "EdgeColouring":
        return cls(N, r, bytes([colour]) * (N * (N - 1) // 2))

    @classmethod
    def from_graph(cls, g: Graph, edge_colour: int = RED, other: int = BLUE, r: int = 2) -> "EdgeColouring":
        """Colour the edges of ``g`` with ``edge_colour`` and non-edges with ``other``."""
        return cls.from_function(g.n, r, lambda i, j: edge_colour if g.has_edge(i, j) else other)

    @classmethod
    def from_rows(cls, N: int, r: int, layers: Sequence[Sequence[int]]) -> "EdgeColouring":
        """Build from ``r - 1`` bitmask layers for colours ``1..r-1``."""

        def f(i, j):
            for c, layer in enumerate(layers, start=1):
                if layer[i] >> j & 1:
                    return c
            return 0

        return cls.from_function(N, r, f)

    def colour(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("no colour on a loop")
        return self.col[pair_index(u, v)]

    __call__ = colour

    @cached_property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        """``rows[c][v]``: bitmask of vertices joined to ``v`` in colour ``c``."""
        out = [[0] * self.N for _ in range(self.r)]
        k = 0
        for j in range(self.N):
            for i in range(j):
                c = self.col[k]
                out[c][i] |= 1 << j
                out[c][j] |= 1 << i
                k += 1
        return tuple(tuple(x) for x in out)

    def swapped(self, a: int = RED, b: int = BLUE) -> "EdgeColouring":
        table = list(range(self.r))
        table[a], table[b] = b, a
        return EdgeColouring(self.N, self.r, bytes(table[c] for c in self.col))

    def recoloured(self, u: int, v: int, c: int) -> "EdgeColouring":
        col = bytearray(self.col)
        col[pair_index(u, v)] = c
        return EdgeColouring(self.N, self.r, bytes(col))


def colour_class(c: EdgeColouring, i: int) -> Graph:
    if not 0 <= i < c.r:
        raise IndexError(f"colour {i} out of range for r={c.r}")
    return Graph(c.N, c.rows[i])


def restrict(c: EdgeColouring, S: Iterable[int]) -> EdgeColouring:
    """Induced colouring on ``S`` relabelled order-preservingly to ``0..|S|-1``."""
    verts = sorted(set(S))
    if verts and not (0 <= verts[0] and verts[-1] < c.N):
        raise ValueError("subset not contained in the host")
    return EdgeColouring.from_function(len(verts), c.r, lambda i, j: c.colour(verts[i], verts[j]))


def _draw(rng: random.Random, r: int) -> int:
    if r == 2:
        return rng.getrandbits(1)
    while True:
        x = rng.getrandbits(2)
        if x < r:
            return x


def random_colouring(N: int, r: int, seed: int) -> EdgeColouring:
    if N < 1 or r < 2:
        raise ValueError("need N >= 1 and r >= 2")
    rng = random.Random(seed)
    return EdgeColouring(N, r, bytes(_draw(rng, r) for _ in range(N * (N - 1) // 2)))


def write_colouring(c: EdgeColouring, comments: Sequence[str] = ()) -> str:
    lines = [f"# {line}" for line in comments]
    lines.append(f"{c.N} {c.r}")
    for j in range(1, c.N):
        start = j * (j - 1) // 2
        lines.append(" ".join(str(x) for x in c.col[start : start + j]))
    return "\n".join(lines) + "\n"


def parse_colouring(text: str) -> EdgeColouring:
    """Parse the text format; ``#`` lines are comments and are skipped."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ColouringFormatError("empty colouring text")
    head = lines[0].split()
    if len(head) != 2:
        raise ColouringFormatError(f"header must be 'N r', got {lines[0]!r}")
    try:
        N, r = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ColouringFormatError(f"non-integer header {lines[0]!r}") from exc
    if not 0 <= N <= MAX_N or not 2 <= r <= 3:
        raise ColouringFormatError(f"unsupported header N={N} r={r}")
    body = lines[1:]
    if len(body) != max(N - 1, 0):
        raise ColouringFormatError(f"expected {max(N - 1, 0)} rows, got {len(body)}")
    col = bytearray()
    for j, line in enumerate(body, start=1):
        try:
            vals = [int(x) for x in line.split()]
        except ValueError as exc:
            raise ColouringFormatError(f"non-integer entry in row {j}") from exc
        if len(vals) != j:
            raise ColouringFormatError(f"row {j} must hold {j} entries, got {len(vals)}")
        for x in vals:
            if not 0 <= x < r:
                raise ColouringFormatError(f"colour index {x} out of range for r={r}")
        col.extend(vals)
    return EdgeColouring(N, r, bytes(col))
