import random

import pytest
from hypothesis import given, strategies as st

from oracles import longest_mono_path
from ramsey_spectrum.colouring import BLUE, RED, EdgeColouring, colour_class, random_colouring
from ramsey_spectrum.constructions import biclique_path_graph, clique_path_graph
from ramsey_spectrum.engine import find_mono_copy
from ramsey_spectrum.extraction import (
    ASSEMBLY_SHORTFALL,
    CLIQUE_COVER_FAIL,
    CONNECTOR_MISSING,
    MONO_PATH_TOO_SHORT,
    RED_BICLIQUE_PRESENT,
    TILE_SHORTFALL,
    CliquePath,
    MonoEmbedding,
    StepFailure,
    cover_by_clique_paths,
    extract_case1,
    extract_case2,
    find_long_mono_path,
    greedy_mono_tiling,
    is_mono_path,
    stitch_case1,
)
from ramsey_spectrum.graph import Graph, complete_bipartite, cycle_graph, find_embedding


def all_blue(N):
    return EdgeColouring.monochromatic(N, colour=BLUE)


def all_red(N):
    return EdgeColouring.monochromatic(N, colour=RED)


def blowup(parts: list[list[int]], N: int) -> EdgeColouring:
    """Red between parts, blue inside them."""
    where = {v: k for k, part in enumerate(parts) for v in part}
    return EdgeColouring.from_function(N, 2, lambda i, j: BLUE if where[i] == where[j] else RED)


# -- mono paths -------------------------------------------------------------------


def test_long_path_examples():
    colour, path = find_long_mono_path(all_red(6))
    assert colour == RED and len(path) == 6
    # red K_{3,3}, blue two triangles
    c = blowup([[0, 1, 2], [3, 4, 5]], 6)
    colour, path = find_long_mono_path(c)
    assert len(path) >= 4 and is_mono_path(c, colour, path)
    assert longest_mono_path(c.rows[RED], 6) == 6


@given(st.integers(2, 40), st.integers(0, 2**32))
def test_long_path_random(N, seed):
    c = random_colouring(N, 2, seed)
    colour, path = find_long_mono_path(c)
    assert len(path) >= -(-2 * N // 3) and is_mono_path(c, colour, path)


def test_long_path_on_extremal_colourings():
    # blue clique on about 2N/3 vertices, red between it and the rest
    for N in range(3, 25):
        k = -(-2 * N // 3)
        c = EdgeColouring.from_function(N, 2, lambda i, j: BLUE if i < k and j < k else RED)
        colour, path = find_long_mono_path(c)
        assert len(path) >= k and is_mono_path(c, colour, path)


def test_long_path_swap_equivariant():
    for seed in range(30):
        c = random_colouring(15, 2, seed)
        a = find_long_mono_path(c)
        b = find_long_mono_path(c.swapped())
        assert b == (1 - a[0], a[1])


def test_long_path_rejects_bad_input():
    with pytest.raises(ValueError):
        find_long_mono_path(random_colouring(5, 3, 0))
    with pytest.raises(ValueError):
        find_long_mono_path(EdgeColouring.monochromatic(1))


# -- tiling --------------------------------------------------------------------------


def test_tiling_examples():
    tiles = greedy_mono_tiling(all_blue(8), range(8), complete_bipartite(2, 2), BLUE)
    assert len(tiles) == 2 and sorted(v for t in tiles for v in t.map) == list(range(8))
    assert greedy_mono_tiling(all_red(8), range(8), complete_bipartite(2, 2), BLUE) == []
    c5 = EdgeColouring.from_graph(cycle_graph(5))
    assert greedy_mono_tiling(c5, range(5), Graph.complete(3), RED) == []


@given(st.integers(4, 16), st.integers(0, 2**32), st.sampled_from([0, 1]))
def test_tiling_is_disjoint_and_maximal(N, seed, colour):
    c = random_colouring(N, 2, seed)
    S = [v for v in range(N) if random.Random(seed).random() < 0.8]
    pat = Graph.complete(3)
    tiles = greedy_mono_tiling(c, S, pat, colour)
    used = [v for t in tiles for v in t.map]
    assert len(used) == len(set(used)) and set(used) <= set(S)
    for t in tiles:
        assert MonoEmbedding(colour, t, pat).verify(c)
    rest = [v for v in S if v not in used]
    assert find_embedding(colour_class(c, colour).induced(rest), pat) is None


# -- stitching -------------------------------------------------------------------------


def test_stitch_all_blue():
    c = all_blue(10)
    tiles = greedy_mono_tiling(c, range(10), complete_bipartite(2, 2), BLUE)
    out = stitch_case1(c, tiles, 2, 8)
    assert isinstance(out, MonoEmbedding) and out.colour == BLUE
    assert out.pattern == biclique_path_graph(2, 8) and out.verify(c)


def test_stitch_tile_shortfall():
    c = all_blue(10)
    tiles = greedy_mono_tiling(c, range(4), complete_bipartite(2, 2), BLUE)
    out = stitch_case1(c, tiles, 2, 8)
    assert isinstance(out, StepFailure) and out.step == TILE_SHORTFALL and out.verify(c)


def test_stitch_connector_missing():
    # tiles {0,1|2,3} and {4,5|6,7}; every pair B_1 x A_2 = {2,3} x {4,5} red
    def col(i, j):
        return RED if {i, j} & {2, 3} and {i, j} & {4, 5} and len({i, j} & {2, 3, 4, 5}) == 2 else BLUE

    c = EdgeColouring.from_function(8, 2, col)
    tiles = greedy_mono_tiling(c, range(8), complete_bipartite(2, 2), BLUE)
    assert [t.map for t in tiles] == [(0, 1, 2, 3), (4, 5, 6, 7)]
    out = stitch_case1(c, tiles, 2, 8)
    assert out.step == CONNECTOR_MISSING and out.verify(c)
    assert out.payload["A"] == [2, 3] and out.payload["B"] == [4, 5]
    red = EdgeColouring.from_function(8, 2, lambda i, j: RED if col(i, j) == RED else BLUE)
    assert find_mono_copy(red, complete_bipartite(2, 2))[0] == RED


# -- clique paths ------------------------------------------------------------------------


def test_cover_single_clique():
    c = all_blue(3)
    out = cover_by_clique_paths(c, [[0, 1, 2]], 3)
    assert len(out) == 1 and out[0].links == [] and out[0].check(c)


def test_cover_all_blue_four_triangles():
    c = all_blue(12)
    cliques = [[0, 1, 2], [3, 4, 5], [6, 7, 8], [9, 10, 11]]
    out = cover_by_clique_paths(c, cliques, 3)
    assert len(out) == 2 and sum(len(p.cliques) for p in out) == 4
    assert all(p.check(c) for p in out)


def test_cover_bipartite_blowup():
    c = blowup([list(range(6)), list(range(6, 12))], 12)
    cliques = [[0, 1, 2], [6, 7, 8], [3, 4, 5], [9, 10, 11]]
    out = cover_by_clique_paths(c, cliques, 3)
    assert isinstance(out, list) and len(out) <= 2
    covered = sorted(tuple(q) for p in out for q in p.cliques)
    assert covered == sorted(tuple(q) for q in cliques)
    assert all(p.check(c) for p in out)


def test_cover_fails_with_red_clique_certificate():
    # three blue triangles pairwise joined only by red pairs: the merge step
    # finds a red triangle among the representatives
    c = blowup([[0, 1, 2], [3, 4, 5], [6, 7, 8]], 9)
    out = cover_by_clique_paths(c, [[0, 1, 2], [3, 4, 5], [6, 7, 8]], 3)
    assert isinstance(out, StepFailure) and out.step == CLIQUE_COVER_FAIL
    assert out.payload["reps"] == [0, 3, 6] and out.verify(c)


def test_cover_degenerate_t_is_reported():
    out = cover_by_clique_paths(all_blue(3), [[0], [1]], 1)
    assert isinstance(out, StepFailure) and out.step == CLIQUE_COVER_FAIL


def test_clique_path_invariants_detect_violations():
    c = blowup([[0, 1, 2], [3, 4, 5]], 6)
    assert not CliquePath([(0, 1, 2), (2, 3, 4)], [(1, 2)]).check(c)
    assert not CliquePath([(0, 1, 3)], []).check(c)
    assert not CliquePath([(0, 1), (3, 4)], [(1, 3)]).check(c)
    c2 = all_blue(6)
    assert not CliquePath([(0, 1), (2, 3), (4, 5)], [(1, 2), (2, 4)]).check(c2)
    assert CliquePath([(0, 1), (2, 3), (4, 5)], [(1, 2), (3, 4)]).check(c2)


# -- full pipelines ----------------------------------------------------------------------


def test_case1_adversarial_hosts():
    out = extract_case1(all_red(12), 2, 8)
    assert isinstance(out, MonoEmbedding) and out.colour == RED and out.verify(all_red(12))
    out = extract_case1(all_blue(12), 2, 8)
    assert isinstance(out, MonoEmbedding) and out.colour == BLUE and out.verify(all_blue(12))


def test_case1_without_shortcut_reports_red_biclique():
    out = extract_case1(all_red(12), 2, 8, shortcut=False)
    assert out.step == RED_BICLIQUE_PRESENT and out.verify(all_red(12))


def test_case1_stitching_path_is_exercised():
    # parity colouring: both colour classes contain K_{2,2}, so only the
    # first trace record is pinned down
    N = 24
    c = EdgeColouring.from_function(N, 2, lambda i, j: RED if (i + j) % 2 else BLUE)
    trace = []
    out = extract_case1(c, 2, 8, trace=trace)
    assert out.verify(c)
    assert trace[0]["step"] == "mono_path"


@pytest.mark.parametrize("N,ok", [(16, False), (20, True), (24, True)])
def test_case1_red_cycle_host_goes_through_stitching(N, ok):
    # red Hamiltonian cycle has no red K_{2,2}, so blue is tiled and stitched
    c = EdgeColouring.from_graph(cycle_graph(N))
    trace = []
    out = extract_case1(c, 2, 8, trace=trace)
    assert [r["step"] for r in trace] == ["mono_path", "trim", "tiling", "stitch"]
    assert isinstance(out, MonoEmbedding) == ok and out.verify(c)


def test_case2_adversarial_hosts():
    for c in (all_blue(20), all_red(20)):
        out = extract_case2(c, 3, 9)
        assert isinstance(out, MonoEmbedding) and out.pattern == clique_path_graph(3, 9) and out.verify(c)


def test_case2_assembles_from_clique_paths():
    # path colour red has no red triangle (red is bipartite), so the blue
    # triangles are tiled and merged into a clique path
    N = 30
    c = blowup([list(range(0, N, 2)), list(range(1, N, 2))], N)
    trace = []
    out = extract_case2(c, 3, 9, trace=trace)
    assert isinstance(out, MonoEmbedding) and out.colour == BLUE and out.verify(c)
    assert [r["step"] for r in trace][-1] == "assemble"


def test_case2_shortfall_is_certified():
    N = 24
    c = blowup([list(range(0, N, 2)), list(range(1, N, 2))], N)
    out = extract_case2(c, 3, 9)
    assert isinstance(out, StepFailure) and out.verify(c)
    assert out.step in (ASSEMBLY_SHORTFALL, MONO_PATH_TOO_SHORT)


def test_case2_random_hosts_have_only_verified_outcomes():
    for seed in range(100):
        c = random_colouring(10, 2, seed)
        out = extract_case2(c, 3, 9)
        assert out.verify(c)


@pytest.mark.parametrize("fn,t,n,N", [(extract_case1, 2, 8, 20), (extract_case2, 3, 9, 20)])
def test_swap_equivariance_of_outcome_kind(fn, t, n, N):
    for seed in range(40):
        c = random_colouring(N, 2, seed)
        a, b = fn(c, t, n, shortcut=False), fn(c.swapped(), t, n, shortcut=False)
        assert type(a) is type(b) and getattr(a, "step", None) == getattr(b, "step", None)
        if isinstance(a, MonoEmbedding):
            assert b.colour == 1 - a.colour


def test_failure_payloads_reject_tampering():
    c = all_red(8)
    bad = StepFailure(CONNECTOR_MISSING, {"colour": BLUE, "A": [0, 1], "B": [2, 3]})
    assert not bad.verify(c)
    bad = StepFailure(MONO_PATH_TOO_SHORT, {"colour": RED, "path": list(range(8)), "n": 5})
    assert not bad.verify(c)
    with pytest.raises(ValueError):
        StepFailure("NOPE")


def test_extractors_validate_arguments():
    with pytest.raises(ValueError):
        extract_case1(all_red(10), 3, 5)
    with pytest.raises(ValueError):
        extract_case2(random_colouring(10, 3, 0), 3, 9)
