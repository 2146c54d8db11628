from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from oracles import brute_embeds
from ramsey_spectrum.colouring import GREEN, RED, EdgeColouring, colour_class
from ramsey_spectrum.constructions import RamseyOracle
from ramsey_spectrum.graph import Graph, complete_bipartite, cycle_graph, path_graph
from ramsey_spectrum.lower_bounds import (
    blocked_3colouring,
    circulant_colouring,
    improve_lower_bound,
    r3_lower_bound,
    random_biclique_witness,
    search_witness,
    verify_no_mono,
)


def brute_no_mono(c: EdgeColouring, g: Graph) -> bool:
    return not any(brute_embeds(colour_class(c, i), g) for i in range(c.r))


def test_verify_no_mono_small():
    c5 = EdgeColouring.from_graph(cycle_graph(5))
    assert verify_no_mono(c5, Graph.complete(3))
    assert not verify_no_mono(c5, path_graph(3))
    assert brute_no_mono(c5, Graph.complete(3))


@given(st.integers(1, 3), st.integers(2, 9), st.integers(0, 2**32))
def test_random_biclique_witness(t, N, seed):
    w = random_biclique_witness(t, N, seed, max_tries=50)
    if w is not None:
        assert w.N == N and verify_no_mono(w, complete_bipartite(t, t))
    assert random_biclique_witness(t, N, seed, max_tries=50) == w


def test_random_biclique_witness_examples():
    assert random_biclique_witness(1, 1, 0) is not None
    assert random_biclique_witness(1, 2, 0) is None
    w = random_biclique_witness(2, 5, 0)
    assert w is not None and brute_no_mono(w, complete_bipartite(2, 2))


def test_blocked_colouring_of_c5():
    c5 = EdgeColouring.from_graph(cycle_graph(5))
    b = blocked_3colouring(c5, 3)
    assert b.N == 10 and b.r == 3
    assert not any(b.colour(i, j) == b.colour(j, k) == b.colour(i, k) for i, j, k in combinations(range(10), 3))
    assert b.colour(0, 5) == GREEN and b.colour(0, 1) == RED
    green = colour_class(b, GREEN)
    assert green.num_edges == 25


def test_blocked_colouring_rejects():
    c5 = EdgeColouring.from_graph(cycle_graph(5))
    with pytest.raises(ValueError):
        blocked_3colouring(c5, 1)
    with pytest.raises(ValueError):
        blocked_3colouring(blocked_3colouring(c5, 3), 3)


@pytest.fixture(scope="module")
def oracle(tmp_path_factory):
    return RamseyOracle(cache_dir=tmp_path_factory.mktemp("lb"))


def test_r3_lower_bound_triangle(oracle):
    bound, w = r3_lower_bound(Graph.complete(3), Graph.complete(3), oracle)
    assert bound == 11 and w.N == 10 and verify_no_mono(w, Graph.complete(3))


def test_r3_lower_bound_path_inside_cycle(oracle):
    bound, w = r3_lower_bound(cycle_graph(5), path_graph(3), oracle)
    # chi(P_3) = 2, R(P_3) = 3
    assert bound == 3 and verify_no_mono(w, cycle_graph(5))


def test_r3_lower_bound_rejects(oracle):
    with pytest.raises(ValueError):
        r3_lower_bound(Graph.complete(3), Graph.from_edges(3, [(0, 1)]), oracle)
    with pytest.raises(ValueError):
        r3_lower_bound(path_graph(3), Graph.complete(3), oracle)


def test_circulant_paley_5():
    c = circulant_colouring(5, {1})
    assert c == EdgeColouring.from_graph(cycle_graph(5))


@pytest.mark.parametrize("pattern,N", [(Graph.complete(3), 5), (cycle_graph(4), 5), (path_graph(4), 4)])
def test_search_witness_finds_extremal_colourings(pattern, N):
    w = search_witness(pattern, N, seed=0)
    assert w is not None and brute_no_mono(w, pattern)


def test_search_witness_cannot_beat_true_value():
    assert search_witness(Graph.complete(3), 6, seed=0, restarts=2, steps=100) is None


def test_improve_lower_bound():
    lo, w = improve_lower_bound(Graph.complete(3), 3, seed=1, patience=2)
    assert lo == 6 and w.N == 5 and verify_no_mono(w, Graph.complete(3))
    lo, w = improve_lower_bound(cycle_graph(4), 2, seed=0, patience=1, restarts=2, steps=100)
    assert lo == 6 and verify_no_mono(w, cycle_graph(4))
