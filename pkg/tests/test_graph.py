from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from oracles import brute_chromatic, brute_embeds, brute_isomorphic, labelled_graphs
from ramsey_spectrum.constructions import biclique_path_graph, clique_path_graph, complete_multipartite, double_star
from ramsey_spectrum.graph import (
    Graph,
    Graph6HeaderError,
    Graph6SizeError,
    Graph6TruncatedError,
    canonical_form,
    chromatic_number,
    clique_number,
    complete_bipartite,
    cycle_graph,
    disjoint_union,
    enumerate_graphs,
    find_embedding,
    is_connected,
    parse_graph6,
    path_graph,
    write_graph6,
)


@st.composite
def graphs(draw, min_n=0, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for j in range(n) for i in range(j)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, b in zip(pairs, bits) if b])


def test_graph6_examples():
    assert parse_graph6("A_") == Graph.complete(2)
    assert parse_graph6("B?") == Graph.empty(3)
    assert parse_graph6("Bw") == Graph.complete(3)
    assert write_graph6(Graph.complete(2)) == "A_"
    assert write_graph6(Graph.empty(3)) == "B?"
    assert write_graph6(Graph.complete(3)) == "Bw"


def test_graph6_header_line_accepted():
    assert parse_graph6(">>graph6<<Bw\n") == Graph.complete(3)


def test_graph6_errors_are_distinct():
    with pytest.raises(Graph6HeaderError):
        parse_graph6("")
    with pytest.raises(Graph6TruncatedError):
        parse_graph6("D")
    with pytest.raises(Graph6SizeError):
        parse_graph6("~?@A" + "?" * 400)
    with pytest.raises(Graph6HeaderError):
        parse_graph6("Bww")


def test_graph6_long_form_round_trip():
    g = path_graph(64)
    s = write_graph6(g)
    assert s.startswith("~")
    assert parse_graph6(s) == g


@given(graphs(max_n=12))
def test_graph6_round_trip(g):
    assert parse_graph6(write_graph6(g)) == g


def test_round_trip_every_class_up_to_7():
    for n in range(1, 8):
        for g in enumerate_graphs(n):
            assert parse_graph6(write_graph6(g)) == g


def test_graph_rejects_loops_and_asymmetry():
    with pytest.raises(ValueError):
        Graph(2, (1, 0))
    with pytest.raises(ValueError):
        Graph(2, (2, 0))


def test_is_connected_examples():
    assert is_connected(Graph.complete(3))
    assert not is_connected(disjoint_union(Graph.complete(2), Graph.empty(1)))
    assert is_connected(biclique_path_graph(2, 5))
    assert is_connected(Graph.empty(0))
    assert not is_connected(Graph.empty(2))


def test_chromatic_examples():
    assert chromatic_number(Graph.complete(4)) == 4
    assert chromatic_number(complete_bipartite(2, 2)) == 2
    assert chromatic_number(clique_path_graph(5, 12)) == 5


@given(graphs(min_n=1, max_n=6))
def test_chromatic_matches_brute_force(g):
    assert chromatic_number(g) == brute_chromatic(g)


@given(graphs(min_n=1, max_n=9))
def test_chromatic_at_least_clique_number(g):
    assert chromatic_number(g) >= clique_number(g)


@pytest.mark.parametrize("k,t", [(2, 3), (3, 2), (4, 2), (5, 1)])
def test_chromatic_of_complete_multipartite(k, t):
    assert chromatic_number(complete_multipartite(k, t)) == k


def test_chromatic_budget_returns_none():
    g = complete_multipartite(6, 3)
    assert chromatic_number(g, max_nodes=1) in (None, 6)


def test_canonical_form_examples():
    p3 = path_graph(3)
    assert canonical_form(p3) == canonical_form(p3.relabel([2, 0, 1]))
    assert canonical_form(p3) != canonical_form(Graph.complete(3))
    keys = {canonical_form(g) for g in labelled_graphs(4)}
    assert len(keys) == 11


@given(graphs(max_n=6), graphs(max_n=6))
def test_canonical_form_matches_brute_isomorphism(g, h):
    if g.n != h.n:
        return
    assert (canonical_form(g) == canonical_form(h)) == brute_isomorphic(g, h)


@given(graphs(max_n=12), st.randoms(use_true_random=False))
def test_canonical_form_relabel_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert canonical_form(g) == canonical_form(g.relabel(perm))


def test_canonical_pairs_of_isomorphic_classes_on_5_vertices():
    # every labelled 5-vertex graph lands on one of the 34 classes
    keys = {canonical_form(g) for g in labelled_graphs(5)}
    assert len(keys) == 34


@pytest.mark.parametrize(
    "n,all_count,connected_count,no_iso_count",
    [(1, 1, 1, 0), (2, 2, 1, 1), (3, 4, 2, 2), (4, 11, 6, 7), (5, 34, 21, 23), (6, 156, 112, 122),
     (7, 1044, 853, 888)],
)
def test_enumeration_counts(n, all_count, connected_count, no_iso_count):
    assert len(list(enumerate_graphs(n, "all"))) == all_count
    assert len(list(enumerate_graphs(n, "connected"))) == connected_count
    assert len(list(enumerate_graphs(n, "no_isolated"))) == no_iso_count


@pytest.mark.parametrize("n", [3, 4, 5])
def test_enumeration_matches_labelled_dedupe(n):
    brute = {canonical_form(g) for g in labelled_graphs(n)}
    got = [canonical_form(g) for g in enumerate_graphs(n)]
    assert len(got) == len(set(got)) == len(brute)
    assert set(got) == brute


def test_enumeration_deterministic_and_range_checked():
    assert list(enumerate_graphs(4)) == list(enumerate_graphs(4))
    with pytest.raises(ValueError):
        list(enumerate_graphs(0))
    with pytest.raises(ValueError):
        list(enumerate_graphs(9))


def test_find_embedding_examples():
    assert find_embedding(Graph.complete(4), Graph.complete(3)) is not None
    assert find_embedding(cycle_graph(4), Graph.complete(3)) is None
    assert find_embedding(double_star(2, 2), path_graph(3)) is not None


@given(graphs(max_n=6), graphs(max_n=4))
def test_find_embedding_matches_naive(host, pattern):
    emb = find_embedding(host, pattern)
    assert (emb is not None) == brute_embeds(host, pattern)
    if emb is not None:
        assert emb.is_valid(host, pattern)


def test_find_embedding_is_lexicographically_least():
    host = Graph.complete(5)
    assert find_embedding(host, path_graph(3)).map == (0, 1, 2)
    host = cycle_graph(6)
    emb = find_embedding(host, path_graph(3))
    least = min(p for p in permutations(range(6), 3)
                if host.has_edge(p[0], p[1]) and host.has_edge(p[1], p[2]))
    assert emb.map == least


def test_find_embedding_within_mask():
    host = Graph.complete(6)
    emb = find_embedding(host, Graph.complete(3), within=0b111000)
    assert set(emb.map) == {3, 4, 5}
    assert find_embedding(host, Graph.complete(3), within=0b11) is None
