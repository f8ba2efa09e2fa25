import itertools
import math
import random

from scdas.graph import UGraph, bidirectional_subgraph, is_independent_maximal
from scdas.instances import fixture
from scdas.mis import greedy_mis, luby_mis

from conftest import random_digraph

PATH3 = UGraph.from_edges(3, [(0, 1), (1, 2)])
EMPTY4 = UGraph.from_edges(4, [])


def random_ugraph(n, p, seed):
    rng = random.Random(seed)
    return UGraph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def all_maximal_independent_sets(u):
    found = []
    for r in range(u.n + 1):
        for s in itertools.combinations(range(u.n), r):
            if is_independent_maximal(u, set(s)) == (True, True):
                found.append(frozenset(s))
    return found


def test_greedy_examples():
    assert greedy_mis(bidirectional_subgraph(fixture("i1_mixed"))).members == {0, 2}
    assert greedy_mis(bidirectional_subgraph(fixture("k3"))).members == {0}
    res = greedy_mis(EMPTY4)
    assert res.members == {0, 1, 2, 3} and res.rounds == 0


def test_luby_examples():
    res = luby_mis(EMPTY4, seed=1)
    assert res.members == {0, 1, 2, 3} and res.rounds == 1
    for seed in range(50):
        assert len(luby_mis(bidirectional_subgraph(fixture("k3")), seed).members) == 1
        assert luby_mis(PATH3, seed).members in ({0, 2}, {1})


def test_luby_output_is_some_maximal_independent_set():
    for seed in range(150):
        u = random_ugraph(7, 0.35, seed)
        legal = all_maximal_independent_sets(u)
        assert luby_mis(u, seed).members in legal
        assert greedy_mis(u).members in legal


def test_both_modes_independent_and_maximal():
    for seed in range(300):
        u = random_ugraph(5 + seed % 40, [0.05, 0.2, 0.5][seed % 3], seed)
        for res in (greedy_mis(u), luby_mis(u, seed)):
            assert is_independent_maximal(u, res.members) == (True, True)


def test_luby_is_deterministic_per_seed():
    u = random_ugraph(60, 0.1, 9)
    assert luby_mis(u, 5) == luby_mis(u, 5)


def test_no_bidirectional_edges_gives_whole_vertex_set():
    u = bidirectional_subgraph(fixture("dicycle3"))
    assert greedy_mis(u).members == {0, 1, 2}
    assert luby_mis(u, 3).members == {0, 1, 2}
    tournament = random_digraph(6, 0.0, 0)
    assert greedy_mis(bidirectional_subgraph(tournament)).members == set(range(6))


def test_luby_round_count_statistics():
    violations = 0
    trials = 1000
    for seed in range(trials):
        n = 2 + seed % 199
        u = random_ugraph(n, min(1.0, 6 / n), seed)
        if luby_mis(u, seed).rounds > 8 * math.log2(n):
            violations += 1
    assert violations / trials < 0.01
