"""Kernighan-Lin local search in the Fiduccia-Mattheyses single-move form.

Each pass moves every vertex at most once, always taking the best unlocked
move, then rolls back to the best prefix. Works for max_cut (no balance
constraint) and min_quotient_cut (moves that would empty a side are
forbidden, candidates ranked by the exact resulting quotient).
"""

from __future__ import annotations

import time
from typing import Callable

from . import graph as _graph
from .graph import LEFT, Graph, Objective, Partition, all_gains
from .initial import get_initializer
from .rng import derive_seed


class GainBuckets:
    """Per-side bucket lists of unlocked vertices keyed by integer benefit.

    Buckets are intrusive doubly-linked lists over the vertex ids; insertion
    is at the head and selection takes the head (LIFO).
    """

    def __init__(self, n: int, max_key: int):
        self.offset = max_key
        size = 2 * max_key + 1
        self.head = ([-1] * size, [-1] * size)
        self.next = [-1] * n
        self.prev = [-1] * n
        self.key = [0] * n
        self.where = [-1] * n  # side the vertex is filed under, -1 if absent
        self.top = [-1, -1]

    def __contains__(self, v: int) -> bool:
        return self.where[v] >= 0

    def insert(self, v: int, side: int, key: int) -> None:
        i = key + self.offset
        heads = self.head[side]
        h = heads[i]
        self.next[v] = h
        self.prev[v] = -1
        if h >= 0:
            self.prev[h] = v
        heads[i] = v
        self.key[v] = key
        self.where[v] = side
        if i > self.top[side]:
            self.top[side] = i

    def remove(self, v: int) -> None:
        side = self.where[v]
        nx, pv = self.next[v], self.prev[v]
        if pv >= 0:
            self.next[pv] = nx
        else:
            self.head[side][self.key[v] + self.offset] = nx
        if nx >= 0:
            self.prev[nx] = pv
        self.where[v] = -1

    def rekey(self, v: int, key: int) -> None:
        side = self.where[v]
        self.remove(v)
        self.insert(v, side, key)

    def best(self, side: int) -> int:
        """Head vertex of the highest nonempty bucket on ``side``, or -1."""
        heads = self.head[side]
        i = self.top[side]
        while i >= 0 and heads[i] < 0:
            i -= 1
        self.top[side] = i
        return heads[i] if i >= 0 else -1

    def members(self, key: int, side: int) -> list[int]:
        out = []
        v = self.head[side][key + self.offset]
        while v >= 0:
            out.append(v)
            v = self.next[v]
        return out


def _pick_maxcut(b: GainBuckets, p: Partition) -> int:
    a, c = b.best(0), b.best(1)
    if a < 0 or c < 0:
        return a if c < 0 else c
    ka, kc = b.key[a], b.key[c]
    if ka != kc:
        return a if ka > kc else c
    return min(a, c)


def _pick_quotient(b: GainBuckets, p: Partition) -> int:
    best_v, best_q = -1, float("inf")
    for s in (0, 1):
        size_s = p.size_left if s == LEFT else p.size_right
        if size_s <= 1:
            continue
        v = b.best(s)
        if v < 0:
            continue
        # key is the cut reduction for quotient cut
        new_cut = p.cut - b.key[v]
        if s == LEFT:
            q = new_cut / min(p.size_left - 1, p.size_right + 1)
        else:
            q = new_cut / min(p.size_left + 1, p.size_right - 1)
        if q < best_q or (q == best_q and v < best_v):
            best_v, best_q = v, q
    return best_v


def fm_pass_inplace(
    g: Graph,
    p: Partition,
    objective: Objective,
    deadline: float | None = None,
    on_move: Callable | None = None,
) -> bool:
    """One FM pass on ``p`` in place; returns whether the best prefix beat the start.

    ``on_move(p, gains, buckets, locked)`` is called after every move (for
    oracle checks in tests).
    """
    n = g.n
    adj, side = g.adj, p.side
    gains = all_gains(g, side)
    sign = 1 if objective is Objective.MAX_CUT else -1
    buckets = GainBuckets(n, max(g.max_degree(), 1))
    for v in range(n):
        buckets.insert(v, side[v], sign * gains[v])
    pick = _pick_maxcut if objective is Objective.MAX_CUT else _pick_quotient
    better = objective.better

    start_score = best_score = p.score(objective)
    best_len = 0
    moves: list[int] = []
    deltas: list[int] = []
    locked = bytearray(n)
    rekey = buckets.rekey
    clock = time.perf_counter
    while True:
        if deadline is not None and not (len(moves) & 15) and clock() >= deadline:
            break
        v = pick(buckets, p)
        if v < 0:
            break
        buckets.remove(v)
        locked[v] = 1
        sv = side[v]
        for w in adj[v]:
            if side[w] == sv:
                gains[w] -= 2
            else:
                gains[w] += 2
            if not locked[w]:
                rekey(w, sign * gains[w])
        d = gains[v]
        p.move(v, d)
        gains[v] = -d
        moves.append(v)
        deltas.append(d)
        score = p.score(objective)
        if better(score, best_score):
            best_score, best_len = score, len(moves)
        if on_move is not None:
            on_move(p, gains, buckets, locked)
    for i in range(len(moves) - 1, best_len - 1, -1):
        p.move(moves[i], -deltas[i])
    if _graph.DEBUG_CHECKS:
        p.verify(g)
    return better(best_score, start_score)


def fm_pass(g: Graph, p: Partition, objective: Objective) -> tuple[Partition, bool]:
    q = p.copy()
    improved = fm_pass_inplace(g, q, objective)
    return q, improved


def fm_optimize(
    g: Graph,
    p0: Partition | None,
    objective: Objective,
    time_budget: float | None = None,
    seed: int = 0,
    init: str = "random",
    max_restarts: int | None = None,
    stats: dict | None = None,
) -> Partition:
    """Repeated FM passes to a local optimum, restarting from fresh ``init`` partitionings.

    Stops when the time budget is spent or after ``max_restarts`` restarts;
    with neither given, performs a single descent from ``p0``.
    """
    init_gen = get_initializer(init)
    if p0 is None:
        p0 = init_gen(g, objective, derive_seed(seed, 1, 0))
    if time_budget is None and max_restarts is None:
        max_restarts = 0
    t0 = time.perf_counter()
    deadline = None if time_budget is None else t0 + time_budget
    best = p0.copy()
    p = p0.copy()
    passes = 0
    restart = 0
    while True:
        while True:
            improved = fm_pass_inplace(g, p, objective, deadline)
            passes += 1
            if not improved or (deadline is not None and time.perf_counter() >= deadline):
                break
        if objective.better(p.score(objective), best.score(objective)):
            best = p.copy()
        if deadline is not None and time.perf_counter() >= deadline:
            break
        restart += 1
        if max_restarts is not None and restart > max_restarts:
            break
        p = init_gen(g, objective, derive_seed(seed, 1, restart))
    if stats is not None:
        stats.update(passes=passes, restarts=restart, loop_time=time.perf_counter() - t0)
    return best
