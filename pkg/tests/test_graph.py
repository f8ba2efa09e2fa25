import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from scdas.graph import (Digraph, DiskNode, GraphError, UGraph, Verdict, bidirectional_subgraph,
                         build_disk_graph, diameter, format_decimal, induced_strongly_connected,
                         is_dominating_absorbent, is_independent_maximal, is_strongly_connected,
                         mask_strongly_connected, read_instance, strongly_connected_components,
                         validate_scdas, write_instance)
from scdas.instances import fixture

from conftest import hop_distances, random_digraph, transitive_closure


def nodes(*spec):
    return [DiskNode(i, *t) for i, t in enumerate(spec)]


I1 = fixture("i1_mixed")
DICYCLE = fixture("dicycle3")


def test_build_i1_arcs():
    # d01 = d12 = 1, d02 = sqrt(2); ranges 1, 1, 1.5
    assert set(I1.arcs()) == {(0, 1), (1, 0), (1, 2), (2, 1), (2, 0)}


def test_single_node_has_no_arcs():
    g = build_disk_graph(nodes((5, 5, 3)))
    assert g.n == 1 and g.arcs() == []


def test_boundary_distance_yields_arc():
    g = build_disk_graph(nodes((0, 0, 1), (1, 0, 1)))
    assert set(g.arcs()) == {(0, 1), (1, 0)}


def test_boundary_is_exact_for_decimal_inputs():
    # 0.3^2 + 0.4^2 == 0.5^2 exactly, but not in binary floating point
    g = build_disk_graph(nodes((0, 0, Fraction("0.5")), (Fraction("0.3"), Fraction("0.4"), Fraction("0.1"))))
    assert g.has_arc(0, 1) and not g.has_arc(1, 0)
    h = build_disk_graph(nodes((0, 0, Fraction("0.4999999999999")), (Fraction("0.3"), Fraction("0.4"), 1)))
    assert not h.has_arc(0, 1)


def test_rejects_duplicate_ids_and_bad_ranges():
    with pytest.raises(GraphError, match="duplicate"):
        build_disk_graph([DiskNode(0, 0, 0, 1), DiskNode(0, 1, 1, 1)])
    with pytest.raises(GraphError):
        DiskNode(0, 0, 0, 0)
    with pytest.raises(GraphError):
        DiskNode(0, 0, 0, -2)
    with pytest.raises(GraphError, match="dense"):
        build_disk_graph([DiskNode(0, 0, 0, 1), DiskNode(2, 1, 1, 1)])


def test_coincident_nodes_are_mutual_neighbours():
    g = build_disk_graph(nodes((1, 1, 0.5), (1, 1, 0.1)))
    assert set(g.arcs()) == {(0, 1), (1, 0)}


coords = st.integers(-50, 50).map(lambda v: v / 4)
radii = st.integers(1, 80).map(lambda v: v / 4)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(coords, coords, radii), min_size=1, max_size=12))
def test_edge_rule_matches_distances(spec):
    g = build_disk_graph(nodes(*spec))
    for u, (xu, yu, ru) in enumerate(spec):
        for v, (xv, yv, _) in enumerate(spec):
            if u != v:
                assert g.has_arc(u, v) == (math.hypot(xu - xv, yu - yv) <= ru)
    for u in range(g.n):
        for v in range(g.n):
            assert (v in g.out[u]) == (u in g.inn[v])


def test_strong_connectivity_examples():
    assert is_strongly_connected(I1)
    assert not is_strongly_connected(Digraph.from_arcs(2, [(0, 1)]))
    assert is_strongly_connected(Digraph.from_arcs(1, []))
    assert is_strongly_connected(Digraph.from_arcs(0, []))


def test_scc_examples():
    assert strongly_connected_components(I1) == [[0, 1, 2]]
    assert strongly_connected_components(Digraph.from_arcs(2, [(0, 1)])) == [[0], [1]]
    assert strongly_connected_components(Digraph.from_arcs(3, [])) == [[0], [1], [2]]


def test_scc_agrees_with_transitive_closure():
    for seed in range(1200):
        n = 1 + seed % 8
        g = random_digraph(n, [0.1, 0.25, 0.4][seed % 3], seed)
        reach = transitive_closure(g)
        classes = {frozenset(v for v in range(n) if reach[u][v] and reach[v][u]) for u in range(n)}
        expected = sorted(sorted(c) for c in classes)
        assert strongly_connected_components(g) == expected
        assert is_strongly_connected(g) == (len(expected) <= 1)
        full = (1 << n) - 1
        assert mask_strongly_connected(g, full) == (len(expected) <= 1)


def test_dominating_absorbent_examples():
    assert is_dominating_absorbent(I1, {1})
    assert not is_dominating_absorbent(I1, {0})  # no arc 0->2
    assert is_dominating_absorbent(I1, {0, 1, 2})
    with pytest.raises(GraphError):
        is_dominating_absorbent(I1, {5})


def test_validate_examples():
    assert validate_scdas(I1, {1}) is Verdict.VALID
    assert validate_scdas(I1, {0, 2}) is Verdict.NOT_STRONGLY_CONNECTED
    # 2 is dominated by 1 and absorbed by 0, but G[{0,1}] has only 0->1
    assert validate_scdas(DICYCLE, {0, 1}) is Verdict.NOT_STRONGLY_CONNECTED
    assert validate_scdas(DICYCLE, {0}) is Verdict.NOT_DOMINATING
    assert validate_scdas(Digraph.from_arcs(3, [(0, 1), (1, 0), (2, 0), (0, 2)]), {1}) is Verdict.NOT_DOMINATING
    assert validate_scdas(I1, set()) is Verdict.EMPTY_ON_NONEMPTY


def test_verdict_order_absorbent_before_connectivity():
    # 2 is dominated by 1, but its only out-neighbour is 0
    g = Digraph.from_arcs(3, [(0, 1), (1, 0), (1, 2), (2, 0)])
    assert validate_scdas(g, {1}) is Verdict.NOT_ABSORBENT


def test_validate_full_set_and_monotonicity():
    for seed in range(300):
        g = random_digraph(7, 0.35, seed)
        if not is_strongly_connected(g):
            continue
        assert validate_scdas(g, range(g.n)) is Verdict.VALID
        for mask in range(1, 1 << g.n):
            s = {v for v in range(g.n) if mask >> v & 1}
            if validate_scdas(g, s) is Verdict.VALID:
                for extra in range(g.n):
                    assert is_dominating_absorbent(g, s | {extra})
                break


def test_induced_checks_agree():
    for seed in range(200):
        g = random_digraph(6, 0.4, seed)
        for mask in range(1 << g.n):
            s = [v for v in range(g.n) if mask >> v & 1]
            sub, _ = g.induced(s)
            expected = is_strongly_connected(sub)
            assert induced_strongly_connected(g, s) == expected
            assert mask_strongly_connected(g, mask) == expected


def test_diameter_examples():
    assert diameter(I1) == 2
    assert diameter(Digraph.from_arcs(1, [])) == 0
    assert diameter(fixture("bipath3")) == 2
    with pytest.raises(GraphError):
        diameter(Digraph.from_arcs(2, [(0, 1)]))


def test_diameter_matches_floyd_warshall():
    for seed in range(300):
        g = random_digraph(2 + seed % 7, 0.45, seed)
        if is_strongly_connected(g):
            d = hop_distances(g)
            assert diameter(g) == max(max(row) for row in d)


def test_bidirectional_subgraph_examples():
    assert bidirectional_subgraph(I1).edges() == [(0, 1), (1, 2)]
    assert bidirectional_subgraph(DICYCLE).edges() == []
    assert bidirectional_subgraph(fixture("k3")).edges() == [(0, 1), (0, 2), (1, 2)]


def test_independent_maximal_examples():
    path = UGraph.from_edges(3, [(0, 1), (1, 2)])
    assert is_independent_maximal(path, {0, 2}) == (True, True)
    assert is_independent_maximal(path, {0}) == (True, False)
    assert is_independent_maximal(path, {0, 1}) == (False, False)


def test_instance_round_trip_and_errors():
    g = fixture("i1_mixed")
    text = write_instance(g)
    assert text == "n=3\n0 0 0 1\n1 1 0 1\n2 1 1 1.5\n"
    assert read_instance(text) == g
    assert read_instance(write_instance(g, one_based=True), one_based=True) == g
    with pytest.raises(GraphError, match="out-of-order"):
        read_instance("n=2\n1 0 0 1\n0 1 0 1\n")
    with pytest.raises(GraphError, match="duplicate"):
        read_instance("n=2\n0 0 0 1\n0 1 0 1\n")
    with pytest.raises(GraphError, match="header"):
        read_instance("0 0 0 1\n")
    with pytest.raises(GraphError):
        read_instance("n=1\n0 0 0 -1\n")


def test_format_decimal():
    assert format_decimal(Fraction(3, 8)) == "0.375"
    assert format_decimal(Fraction(-5, 4)) == "-1.25"
    assert format_decimal(7) == "7"
    with pytest.raises(GraphError):
        format_decimal(Fraction(1, 3))
