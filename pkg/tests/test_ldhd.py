import random

import pytest

from scdas.graph import Digraph, GraphError, Verdict, validate_scdas
from scdas.instances import FIXTURE_NAMES, fixture
from scdas.ldhd import (Color, LdhdState, StepRecord, forced_neighbor_rule, ldhd, ldhd_states, ldhd_step,
                        recompute_degrees, trace_text)

from conftest import desk_instance, random_digraph

W, G, R = Color.WHITE, Color.GREEN, Color.RED


def test_examples():
    assert ldhd(fixture("i1_mixed"))[0].members == {1}
    assert ldhd(fixture("star5"))[0].members == {0}
    assert ldhd(fixture("dicycle3"))[0].members == {0, 1, 2}
    assert ldhd(fixture("k3"))[0].members == {1}
    assert ldhd(fixture("bipath3"))[0].members == {1}


def test_i1_trace():
    sol, trace = ldhd(fixture("i1_mixed"))
    assert [r.to_line() for r in trace] == ["1 0 red u=1", "2 2 red"]
    assert trace_text(trace) == "1 0 red u=1\n2 2 red\n"
    assert sol.witness == {"steps": 2, "checks": 2}


def test_first_step_on_i1():
    g = fixture("i1_mixed")
    s = ldhd_step(LdhdState.initial(g), g)
    assert s.color == (R, G, W)
    assert s.last == StepRecord(1, 0, "red", 1, None)


def test_first_step_on_k3():
    g = fixture("k3")
    s = ldhd_step(LdhdState.initial(g), g)
    assert s.color == (R, G, W) and s.degree == (2, 1, 1)


def test_green_branch_has_no_side_effects():
    g = fixture("dicycle3")
    s0 = LdhdState.initial(g)
    s1 = ldhd_step(s0, g)
    assert s1.color == (G, W, W) and s1.degree == s0.degree and s1.last.verdict == "green"


def test_star_hub_forced_at_first_removal():
    g = fixture("star5")
    s1 = ldhd_step(LdhdState.initial(g), g)
    assert s1.color == (G, R, W, W, W) and s1.last.u == 0


def test_forced_rule_single_in_neighbour():
    g = fixture("star5")
    state = LdhdState((W, R, W, W, W), recompute_degrees(g, (W, R, W, W, W)))
    after, forced = forced_neighbor_rule(state, g)
    assert forced == (0,) and after.color[0] == G
    # reaches its fixpoint after one change
    assert forced_neighbor_rule(after, g) == (after, ())


def test_forced_rule_two_in_neighbours_no_change():
    g = fixture("k3")
    state = LdhdState.initial(g)
    assert forced_neighbor_rule(state, g) == (state, ())


def test_forced_rule_on_cycle_with_red_entry():
    # with 0 red, 1 keeps the sole in-neighbour 3 and the sole out-neighbour 2
    g = Digraph.from_arcs(4, [(1, 2), (2, 3), (3, 1), (0, 1), (3, 0)])
    color = (R, W, W, W)
    after, forced = forced_neighbor_rule(LdhdState(color, recompute_degrees(g, color)), g)
    assert forced == (3, 2)
    assert after.color == (R, W, G, G)


def test_forced_rule_single_pass_is_fixpoint():
    # greening never changes which neighbours are red, so a second pass finds nothing
    rng = random.Random(4)
    for seed in range(300):
        g = random_digraph(7, 0.35, seed)
        color = tuple(rng.choice([W, W, G, R]) for _ in range(g.n))
        after, _ = forced_neighbor_rule(LdhdState(color, recompute_degrees(g, color)), g)
        assert forced_neighbor_rule(after, g) == (after, ())


def test_rejects_disconnected_and_finished_states():
    with pytest.raises(GraphError):
        ldhd(Digraph.from_arcs(2, [(0, 1)]))
    g = fixture("k3")
    final = list(ldhd_states(g))[-1]
    with pytest.raises(GraphError):
        ldhd_step(final, g)


def test_single_node():
    sol, trace = ldhd(Digraph.from_arcs(1, []))
    assert sol.members == {0} and [r.verdict for r in trace] == ["green"]


def check_run(g):
    states = list(ldhd_states(g))
    for prev, cur in zip(states, states[1:]):
        alive = cur.members(W, G)
        assert validate_scdas(g, alive) is Verdict.VALID
        fresh = recompute_degrees(g, cur.color)
        assert all(cur.degree[v] == fresh[v] for v in alive)
        for v in range(g.n):
            if prev.color[v] != W:
                assert cur.color[v] == prev.color[v]
        assert len(cur.members(W)) < len(prev.members(W))
    assert len(states) - 1 <= g.n
    assert states[-1].checks <= g.n
    assert not states[-1].has_white()


def test_invariants_on_fixtures():
    for name in FIXTURE_NAMES:
        check_run(fixture(name))


def test_invariants_on_random_digraphs():
    for seed in range(300):
        g = random_digraph(3 + seed % 10, 0.3, seed)
        try:
            check_run(g)
        except GraphError:
            continue


def test_invariants_on_disk_graphs():
    for seed in range(200):
        check_run(desk_instance([8, 12, 25, 50][seed % 4], seed))
