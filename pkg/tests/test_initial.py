import numpy as np
import pytest

from oracles import brute_cut, cycle, exhaustive_maxcut, k, random_graph
from pathopt.generators import gen_geometric, geometric_from_points
from pathopt.graph import LEFT, RIGHT, Graph, Objective
from pathopt.initial import (
    DiffMode,
    DiffState,
    TieBreak,
    construct_w,
    default_initializer,
    get_initializer,
    greedy_side,
    init_line,
    init_random,
    select_diff,
)
from pathopt.rng import make_rng


def test_random_single_vertex():
    g = Graph.from_edges(1, [])
    assert {tuple(init_random(g, s).side) for s in range(20)} == {(0,), (1,)}


def test_random_deterministic_and_balanced():
    g = Graph.from_edges(10000, [])
    assert init_random(g, 3) == init_random(g, 3)
    assert abs(init_random(g, 3).size_left - 5000) < 200


def test_line_two_points():
    g = geometric_from_points(np.array([[0.1, 0.5], [0.9, 0.5]]), 0.05)
    p = init_line(g, 0, theta=0.0)
    assert p.left_set() == {0}


def test_line_sizes():
    g = gen_geometric(101, 0.1, 4)
    for s in range(5):
        p = init_line(g, s)
        assert (p.size_left, p.size_right) == (50, 51)


def test_line_two_blobs():
    rng = np.random.default_rng(0)
    a = rng.uniform([0.05, 0.3], [0.25, 0.7], (40, 2))
    b = rng.uniform([0.75, 0.3], [0.95, 0.7], (40, 2))
    bridge = np.array([[0.4, 0.5], [0.6, 0.5]])
    g = geometric_from_points(np.vstack([a, b, bridge]), 0.3)
    p = init_line(g, 0, theta=0.0)
    crossing = sum(1 for u, v in g.edges if (g.coords[u, 0] < 0.5) != (g.coords[v, 0] < 0.5))
    assert p.cut == crossing


def test_line_needs_coords():
    with pytest.raises(ValueError):
        init_line(k(3), 0)


def _state_with_deltas():
    # unplaced 0,1,2 with delta 3,1,0 via placed helpers 3..8
    edges = [(0, 3), (0, 4), (0, 5), (1, 6), (2, 7), (2, 8)]
    g = Graph.from_edges(9, edges)
    st = DiffState(g)
    for v in (3, 4, 5, 6, 7):
        st.place(v, LEFT)
    st.place(8, RIGHT)
    return st


def test_select_maxdiff_forced():
    st = _state_with_deltas()
    assert [st.delta(v) for v in range(3)] == [3, 1, 0]
    assert select_diff(st, DiffMode.MAX_DIFF, TieBreak.RANDOM, make_rng(1)) == 0
    assert select_diff(st, DiffMode.MIN_DIFF, TieBreak.RANDOM, make_rng(1)) == 2


def test_select_maxdegree_tiebreak():
    # unplaced 0, 1, 2 with deltas (2, 2, 0) and degrees (5, 7, 1)
    edges = [(0, 3), (0, 4), (0, 10), (0, 11), (0, 12), (1, 5), (1, 6), (1, 13), (1, 14), (1, 15), (1, 16),
             (1, 17), (2, 7)]
    g = Graph.from_edges(18, edges)
    st = DiffState(g)
    for v in (3, 4, 5, 6):
        st.place(v, LEFT)
    assert [st.delta(v) for v in range(3)] == [2, 2, 0]
    assert [g.degree(v) for v in range(3)] == [5, 7, 1]
    for s in range(10):
        assert select_diff(st, DiffMode.MAX_DIFF, TieBreak.MAX_DEGREE_THEN_RANDOM, make_rng(s)) == 1


def test_select_first_uniform():
    g = Graph.from_edges(5, [])
    st = DiffState(g)
    picks = {select_diff(st, DiffMode.MAX_DIFF, TieBreak.RANDOM, make_rng(s)) for s in range(100)}
    assert picks == set(range(5))


def test_select_empty():
    g = Graph.from_edges(1, [])
    st = DiffState(g)
    st.place(0, LEFT)
    with pytest.raises(ValueError):
        select_diff(st, DiffMode.MAX_DIFF, TieBreak.RANDOM, make_rng(0))


def test_w_examples():
    for s in range(10):
        assert construct_w(k(3), Objective.MAX_CUT, s).cut == 2
        assert construct_w(cycle(4), Objective.MAX_CUT, s).cut == 4
        for obj in Objective:
            p = construct_w(Graph.from_edges(6, []), obj, s)
            assert p.cut == 0 and p.size_left + p.size_right == 6


def test_w_min_diff_mode_available():
    g = random_graph(np.random.default_rng(2), 30, 0.2)
    p = construct_w(g, Objective.MIN_QUOTIENT_CUT, 1, mode=DiffMode.MIN_DIFF)
    assert p.cut == brute_cut(g, p.side)


def test_w_greedy_steps_and_state_oracle():
    rng = np.random.default_rng(7)
    for obj in Objective:
        g = random_graph(rng, 60, 0.15)
        trace = []
        p = construct_w(g, obj, 3, trace=trace)
        assert sorted(v for v, *_ in trace) == list(range(g.n))
        assert p.cut == brute_cut(g, p.side)
        placed: dict = {}
        for v, s, nl, nr in trace:
            assert nl == sum(1 for w in g.adj[v] if placed.get(w) == LEFT)
            assert nr == sum(1 for w in g.adj[v] if placed.get(w) == RIGHT)
            if obj is Objective.MAX_CUT:
                assert (nr if s == LEFT else nl) == max(nl, nr)
            placed[v] = s


def test_diffstate_matches_recount():
    g = random_graph(np.random.default_rng(9), 80, 0.1)
    st = DiffState(g)
    rng = make_rng(1)
    for v in rng.permutation(g.n).tolist():
        st.place(v, int(rng.integers(2)))
        for u in range(g.n):
            if not st.placed[u]:
                nl = sum(1 for w in g.adj[u] if st.placed[w] and st.side[w] == LEFT)
                nr = sum(1 for w in g.adj[u] if st.placed[w] and st.side[w] == RIGHT)
                assert (st.n_left[u], st.n_right[u]) == (nl, nr)
                assert st.buckets.key[u] == abs(nl - nr)
    assert st.partition().cut == brute_cut(g, st.side)


def test_greedy_side_quotient_prefers_smaller_on_tie():
    g = Graph.from_edges(3, [])
    st = DiffState(g)
    st.place(0, LEFT)
    assert greedy_side(st, 1, Objective.MIN_QUOTIENT_CUT, make_rng(0)) == RIGHT


def test_initializer_registry():
    g = gen_geometric(50, 0.3, 1)
    assert default_initializer(g, Objective.MIN_QUOTIENT_CUT) == "line"
    assert default_initializer(g, Objective.MAX_CUT) == "random"
    assert default_initializer(k(3), Objective.MIN_QUOTIENT_CUT) == "random"
    for name in ("random", "line", "w"):
        p = get_initializer(name)(g, Objective.MAX_CUT, 1)
        assert p.cut == brute_cut(g, p.side)
    with pytest.raises(ValueError):
        get_initializer("nope")


def test_w_maxcut_near_optimal_small():
    rng = np.random.default_rng(4)
    g = random_graph(rng, 12, 0.5)
    best = max(construct_w(g, Objective.MAX_CUT, s).cut for s in range(30))
    assert best <= exhaustive_maxcut(g)
