"""Initial partitionings: uniform random, the geometric line split, and the greedy W construction."""

from __future__ import annotations

import enum
import math
from typing import Callable

import numpy as np

from .buckets import IndexedBuckets
from .graph import LEFT, RIGHT, Graph, Objective, Partition
from .rng import make_rng


class DiffMode(enum.Enum):
    MAX_DIFF = "maxdiff"
    MIN_DIFF = "mindiff"


class TieBreak(enum.Enum):
    RANDOM = "random"
    MAX_DEGREE_THEN_RANDOM = "maxdegree"


def init_random(g: Graph, seed: int) -> Partition:
    rng = make_rng(seed)
    side = rng.integers(0, 2, size=g.n).tolist()
    return Partition.from_sides(g, side)


def init_line(g: Graph, seed: int, theta: float | None = None) -> Partition:
    """Split a geometric graph in half along a randomly oriented direction."""
    if g.coords is None:
        raise ValueError("line initialisation needs vertex coordinates")
    if theta is None:
        theta = make_rng(seed).uniform(0.0, math.pi)
    proj = g.coords @ np.array([math.cos(theta), math.sin(theta)])
    order = np.lexsort((np.arange(g.n), proj))
    side = [RIGHT] * g.n
    for v in order[: g.n // 2].tolist():
        side[v] = LEFT
    return Partition.from_sides(g, side)


class DiffState:
    """Placed-neighbour counts for a constructive placement process.

    For every unplaced vertex ``v``, ``n_left[v]`` / ``n_right[v]`` count its
    already placed neighbours on each side and the bucket key is
    ``|n_left[v] - n_right[v]|``.
    """

    def __init__(self, g: Graph):
        n = g.n
        self.g = g
        self.placed = bytearray(n)
        self.n_left = [0] * n
        self.n_right = [0] * n
        self.buckets = IndexedBuckets(n, 0, max(g.max_degree(), 1))
        for v in range(n):
            self.buckets.insert(v, 0)
        self.side = [LEFT] * n
        self.size_left = 0
        self.size_right = 0
        self.cut = 0
        self.n_placed = 0

    def delta(self, v: int) -> int:
        return abs(self.n_left[v] - self.n_right[v])

    def unplaced(self) -> int:
        return self.g.n - self.n_placed

    def place(self, v: int, s: int) -> None:
        if self.placed[v]:
            raise ValueError(f"vertex {v} already placed")
        self.buckets.remove(v)
        self.placed[v] = 1
        self.n_placed += 1
        self.side[v] = s
        placed = self.placed
        n_left, n_right = self.n_left, self.n_right
        update = self.buckets.update
        if s == LEFT:
            self.size_left += 1
            self.cut += n_right[v]
            for w in self.g.adj[v]:
                if not placed[w]:
                    n_left[w] += 1
                    update(w, abs(n_left[w] - n_right[w]))
        else:
            self.size_right += 1
            self.cut += n_left[v]
            for w in self.g.adj[v]:
                if not placed[w]:
                    n_right[w] += 1
                    update(w, abs(n_left[w] - n_right[w]))

    def partition(self) -> Partition:
        if self.n_placed != self.g.n:
            raise ValueError("placement incomplete")
        return Partition(self.side.copy(), self.size_left, self.size_right, self.cut)


def select_diff(
    state: DiffState,
    mode: DiffMode,
    tiebreak: TieBreak,
    rng: np.random.Generator,
) -> int:
    """Pick an unplaced vertex of maximal (or minimal) |n_left - n_right|."""
    if not len(state.buckets):
        raise ValueError("no unplaced vertex left")
    b = state.buckets
    key = b.top_key() if mode is DiffMode.MAX_DIFF else b.bottom_key()
    cands = b.bucket(key)
    if tiebreak is TieBreak.MAX_DEGREE_THEN_RANDOM and len(cands) > 1:
        adj = state.g.adj
        best = max(len(adj[v]) for v in cands)
        cands = [v for v in cands if len(adj[v]) == best]
    if len(cands) == 1:
        return cands[0]
    return cands[int(rng.integers(len(cands)))]


def greedy_side(state: DiffState, v: int, objective: Objective, rng: np.random.Generator) -> int:
    """Side on which ``v`` is locally best for the objective.

    For quotient cut the sides are compared by the quotient of the partial
    placement, then by added cut, then by size (smaller side first).
    """
    cut_if_left = state.n_right[v]
    cut_if_right = state.n_left[v]
    if objective is Objective.MAX_CUT:
        if cut_if_left != cut_if_right:
            return LEFT if cut_if_left > cut_if_right else RIGHT
    else:
        L, R = state.size_left, state.size_right
        q_left = _partial_quotient(state.cut + cut_if_left, L + 1, R)
        q_right = _partial_quotient(state.cut + cut_if_right, L, R + 1)
        if q_left != q_right:
            return LEFT if q_left < q_right else RIGHT
        if cut_if_left != cut_if_right:
            return LEFT if cut_if_left < cut_if_right else RIGHT
        if L != R:
            return LEFT if L < R else RIGHT
    return int(rng.integers(2))


def _partial_quotient(cut: int, left: int, right: int) -> float:
    small = min(left, right)
    return math.inf if small == 0 else cut / small


def default_diff_mode(objective: Objective) -> DiffMode:
    # max-diff for both objectives; min-diff stays available on request
    return DiffMode.MAX_DIFF


def construct_w(
    g: Graph,
    objective: Objective,
    seed: int,
    tiebreak: TieBreak = TieBreak.RANDOM,
    trace: list | None = None,
    mode: DiffMode | None = None,
) -> Partition:
    """Greedy constructive partitioning: repeatedly pick a vertex by ``mode`` and place it greedily.

    ``mode`` defaults to max-diff. If ``trace`` is given, one
    ``(v, side, n_left, n_right)`` tuple is appended per placement, with the
    counts taken just before placing ``v``.
    """
    rng = make_rng(seed)
    if mode is None:
        mode = default_diff_mode(objective)
    state = DiffState(g)
    for _ in range(g.n):
        v = select_diff(state, mode, tiebreak, rng)
        s = greedy_side(state, v, objective, rng)
        if trace is not None:
            trace.append((v, s, state.n_left[v], state.n_right[v]))
        state.place(v, s)
    return state.partition()


Initializer = Callable[[Graph, Objective, int], Partition]

INITIALIZERS: dict[str, Initializer] = {
    "random": lambda g, objective, seed: init_random(g, seed),
    "line": lambda g, objective, seed: init_line(g, seed),
    "w": construct_w,
}


def get_initializer(name: str) -> Initializer:
    try:
        return INITIALIZERS[name]
    except KeyError:
        raise ValueError(f"unknown initializer {name!r}; expected one of {sorted(INITIALIZERS)}") from None


def default_initializer(g: Graph, objective: Objective) -> str:
    """Line split for quotient cut on geometric graphs, random otherwise."""
    if objective is Objective.MIN_QUOTIENT_CUT and g.coords is not None:
        return "line"
    return "random"
