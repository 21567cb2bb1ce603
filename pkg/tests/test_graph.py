import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_cut, flipped, k, path, random_graph, random_partition, star
from pathopt.graph import (
    LEFT,
    RIGHT,
    Graph,
    Objective,
    Partition,
    all_gains,
    apply_flip_flop,
    critical_counts,
    cut_count,
    gain,
    quotient_cost,
)


def test_cut_k3():
    g = k(3)
    assert cut_count(g, Partition.from_left_set(g, {0})) == 2


def test_cut_path():
    g = path(4)
    assert cut_count(g, Partition.from_left_set(g, {0, 1})) == 1


def test_cut_random_matches_scan():
    rng = np.random.default_rng(1)
    g = random_graph(rng, 8, 0.5)
    p = random_partition(rng, g)
    assert cut_count(g, p) == p.cut == brute_cut(g, p.side)


def test_cut_size_mismatch():
    g = k(3)
    p = Partition.from_left_set(k(4), {0})
    with pytest.raises(ValueError):
        cut_count(g, p)


def test_quotient_examples():
    assert quotient_cost(path(4), Partition.from_left_set(path(4), {0, 1})) == 0.5
    assert quotient_cost(k(3), Partition.from_left_set(k(3), {0})) == 2.0


def test_quotient_first_three():
    rng = np.random.default_rng(2)
    g = random_graph(rng, 10, 0.3)
    p = Partition.from_left_set(g, {0, 1, 2})
    assert quotient_cost(g, p) == pytest.approx(brute_cut(g, p.side) / 3, rel=1e-12)


def test_quotient_empty_side():
    g = k(3)
    with pytest.raises(ValueError):
        quotient_cost(g, Partition.from_left_set(g, {0, 1, 2}))


def test_critical_counts():
    g = k(3)
    p = Partition.from_left_set(g, {0})
    assert critical_counts(g, p, 0) == (0, 2)
    assert critical_counts(g, p, 1) == (1, 1)
    s = star(4)
    assert critical_counts(s, Partition.from_left_set(s, {0}), 0) == (0, 4)


def test_gain_k3():
    g = k(3)
    p = Partition.from_left_set(g, {0})
    assert gain(g, p, 0) == -2
    assert gain(g, p, 1) == 0


def test_gain_flip_and_recount():
    rng = np.random.default_rng(3)
    g = random_graph(rng, 12, 0.4)
    p = random_partition(rng, g)
    for v in range(g.n):
        assert gain(g, p, v) == brute_cut(g, flipped(p.side, [v])) - brute_cut(g, p.side)


def test_flip_flop_k3():
    g = k(3)
    q = apply_flip_flop(g, Partition.from_left_set(g, {0}), [0, 1])
    assert q.left_set() == {1} and q.cut == 2


def test_flip_flop_empty_and_all():
    rng = np.random.default_rng(4)
    g = random_graph(rng, 15, 0.3)
    p = random_partition(rng, g)
    assert apply_flip_flop(g, p, []) == p
    q = apply_flip_flop(g, p, range(g.n))
    assert q.cut == p.cut and q.side == [1 - s for s in p.side]
    assert (q.size_left, q.size_right) == (p.size_right, p.size_left)


def test_flip_flop_duplicate():
    g = k(3)
    with pytest.raises(ValueError):
        apply_flip_flop(g, Partition.from_left_set(g, {0}), [1, 1])


def test_flip_flop_inplace_flag():
    g = k(3)
    p = Partition.from_left_set(g, {0})
    q = apply_flip_flop(g, p, [2])
    assert p.left_set() == {0} and q is not p
    r = apply_flip_flop(g, p, [2], inplace=True)
    assert r is p and p.left_set() == {0, 2}


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])


def test_graph_invariants():
    rng = np.random.default_rng(5)
    g = random_graph(rng, 30, 0.2)
    g.check()
    assert sum(len(a) for a in g.adj) == 2 * g.m
    for u in range(g.n):
        for v in g.adj[u]:
            assert u in g.adj[v]


def test_objective_order():
    mc, qc = Objective.MAX_CUT, Objective.MIN_QUOTIENT_CUT
    assert mc.better(3, 2) and not mc.better(2, 2)
    assert qc.better(0.5, 1.0) and not qc.better(1.0, 1.0)
    assert qc.score(4, 0, 5) == float("inf")
    assert Objective.parse("maxcut") is mc and Objective.parse("quotient") is qc


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 24),
    seed=st.integers(0, 2**32),
    flips=st.lists(st.lists(st.integers(0, 23), max_size=8, unique=True), max_size=6),
)
def test_flip_flop_properties(n, seed, flips, debug_checks):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, 0.3)
    p = random_partition(rng, g)
    q = p.copy()
    for vs in flips:
        vs = [v for v in vs if v < n]
        before = q.copy()
        apply_flip_flop(g, q, vs, inplace=True)
        assert q.cut == brute_cut(g, q.side)
        assert q.size_left + q.size_right == n
        assert apply_flip_flop(g, q, vs) == before
    assert all_gains(g, q.side) == [gain(g, q, v) for v in range(n)]
    if 0 < q.size_left < n:
        swapped = Partition.from_sides(g, [1 - s for s in q.side])
        assert quotient_cost(g, swapped) == quotient_cost(g, q)


def test_side_labels():
    assert {LEFT, RIGHT} == {0, 1}
