"""Path Optimization.

Grows an alternating vertex sequence from a high-gain start vertex, keeping
a running flip-cost (the cut change if every vertex of the sequence switched
sides), and flip-flops the whole sequence when that improves the objective.
Restarts from fresh greedy W partitionings once the search stalls.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import graph as _graph
from .buckets import IndexedBuckets
from .graph import LEFT, Graph, Objective, Partition, all_gains
from .initial import construct_w
from .rng import derive_seed, make_rng


@dataclass
class AltPath:
    seq: list[int]
    in_path: set[int]
    flip_cost: int
    side_delta: int  # moved LEFT->RIGHT minus moved RIGHT->LEFT

    @classmethod
    def start(cls, g: Graph, p: Partition, v: int) -> "AltPath":
        return cls([v], {v}, _graph.gain(g, p, v), 1 if p.side[v] == LEFT else -1)

    def __len__(self) -> int:
        return len(self.seq)

    def append(self, v: int, side_of_v: int, delta: int) -> None:
        self.seq.append(v)
        self.in_path.add(v)
        self.flip_cost += delta
        self.side_delta += 1 if side_of_v == LEFT else -1


@dataclass
class PoConfig:
    k_starts: int = 10
    stale_iters: int = 5
    # None: never halt on stale restarts, run until the budget is spent.
    stale_restarts: Optional[int] = 5
    time_budget: Optional[float] = None

    def __post_init__(self):
        if self.k_starts < 1 or self.stale_iters < 1:
            raise ValueError("k_starts and stale_iters must be >= 1")
        if self.stale_restarts is not None and self.stale_restarts < 1:
            raise ValueError("stale_restarts must be >= 1 or None")


def _favorable(delta: int, objective: Objective) -> bool:
    return delta >= 0 if objective is Objective.MAX_CUT else delta <= 0


def flip_cost_incr(
    g: Graph, p: Partition, path: AltPath, v: int, objective: Objective
) -> tuple[int, bool]:
    """Flip-cost change from appending ``v`` to ``path``, and whether it is acceptable.

    Edges from ``v`` to vertices outside the path change status when the
    path is flipped; an edge to a path vertex ``u`` becomes internal, which
    cancels the contribution ``u`` had counted for it.
    """
    if v in path.in_path:
        raise ValueError(f"vertex {v} already on the path")
    side = p.side
    sv = side[v]
    if sv == side[path.seq[-1]]:
        raise ValueError(f"vertex {v} does not alternate with the path end")
    delta = 0
    in_path = path.in_path
    for w in g.adj[v]:
        s = 1 if side[w] == sv else -1
        delta += -s if w in in_path else s
    return delta, _favorable(delta, objective)


def _incr(adj_v, sv, side, in_path) -> int:
    delta = 0
    for w in adj_v:
        if w in in_path:
            delta += -1 if side[w] == sv else 1
        else:
            delta += 1 if side[w] == sv else -1
    return delta


def _incr_fast(v, gain_v, adj_sets, sv, side, seq) -> int:
    # gain(v) minus twice the contribution of edges into the (short) path.
    corr = 0
    av = adj_sets[v]
    for u in seq:
        if u in av:
            corr += 1 if side[u] == sv else -1
    return gain_v - 2 * corr


def develop_path(
    g: Graph,
    p: Partition,
    start: int,
    objective: Objective,
    gains: list[int] | None = None,
    adj_sets: list[set[int]] | None = None,
) -> AltPath:
    """Grow an alternating path from ``start`` by first-acceptable extension.

    Max-cut extends from the newest vertex into the opposite side;
    quotient cut extends from the second newest vertex into its own side
    (from ``start`` into the opposite side for the second vertex).
    ``gains``/``adj_sets`` are optional caches used by the driver.
    """
    side = p.side
    adj = g.adj
    gain_start = gains[start] if gains is not None else _graph.gain(g, p, start)
    path = AltPath([start], {start}, gain_start, 1 if side[start] == LEFT else -1)
    seq, in_path = path.seq, path.in_path
    maximize = objective is Objective.MAX_CUT
    fast = gains is not None and adj_sets is not None
    while True:
        if maximize or len(seq) == 1:
            anchor = seq[-1]
            want = 1 - side[anchor]
        else:
            anchor = seq[-2]
            want = side[anchor]
        found = False
        for w in adj[anchor]:
            if side[w] != want or w in in_path:
                continue
            if fast and len(seq) < len(adj[w]):
                delta = _incr_fast(w, gains[w], adj_sets, want, side, seq)
            else:
                delta = _incr(adj[w], want, side, in_path)
            if (delta >= 0) if maximize else (delta <= 0):
                path.append(w, want, delta)
                found = True
                break
        if not found:
            return path


def _sample(items: list[int], k: int, rng: np.random.Generator) -> list[int]:
    """k distinct elements, uniformly, by a partial Fisher-Yates over a virtual copy."""
    n = len(items)
    if k >= n:
        out = list(items)
        rng.shuffle(out)
        return out
    swapped: dict[int, int] = {}
    out = []
    for j in range(k):
        r = j + int(rng.integers(n - j))
        out.append(items[swapped.get(r, r)])
        swapped[r] = swapped.get(j, j)
    return out


class PathOptimizer:
    """Stateful Path Optimization run over one graph.

    ``run`` returns the best partitioning seen; ``stats`` holds counters
    (iterations, accepted flips, path lengths, restarts, loop time).
    """

    def __init__(self, g: Graph, objective: Objective, cfg: PoConfig | None = None, seed: int = 0):
        self.g = g
        self.objective = objective
        self.cfg = cfg or PoConfig()
        self.seed = seed
        self.rng = make_rng(derive_seed(seed, 0))
        self.adj_sets = [set(a) for a in g.adj]
        maxdeg = max(g.max_degree(), 1)
        self._key_range = (-maxdeg, maxdeg)
        self.stats = {
            "iterations": 0,
            "flips": 0,
            "path_lengths": [],
            "restarts": 0,
            "loop_time": 0.0,
        }

    def _load(self, p: Partition) -> None:
        self.p = p
        self.gains = all_gains(self.g, p.side)
        self.buckets = IndexedBuckets(self.g.n, *self._key_range)
        for v, gv in enumerate(self.gains):
            self.buckets.insert(v, gv)

    def best_starts(self) -> list[int]:
        k = self.cfg.k_starts
        walk = self.buckets.descending() if self.objective is Objective.MAX_CUT else self.buckets.ascending()
        out: list[int] = []
        for _, bucket in walk:
            need = k - len(out)
            if len(bucket) <= need:
                members = list(bucket)
                self.rng.shuffle(members)
                out.extend(members)
            else:
                out.extend(_sample(bucket, need, self.rng))
            if len(out) >= k:
                break
        return out

    def _flip(self, seq: list[int]) -> None:
        p, gains, side, adj = self.p, self.gains, self.p.side, self.g.adj
        update = self.buckets.update
        for v in seq:
            sv = side[v]
            for w in adj[v]:
                gains[w] += -2 if side[w] == sv else 2
                update(w, gains[w])
            p.move(v, gains[v])
            gains[v] = -gains[v]
            update(v, gains[v])
        if _graph.DEBUG_CHECKS:
            p.verify(self.g)
            assert gains == all_gains(self.g, p.side)

    def iterate(self) -> bool:
        """One iteration: try the best starts, flip the first improving path."""
        g, p, objective = self.g, self.p, self.objective
        self.stats["iterations"] += 1
        current = p.score(objective)
        for s in self.best_starts():
            path = develop_path(g, p, s, objective, self.gains, self.adj_sets)
            new_left = p.size_left - path.side_delta
            new_right = p.size_right + path.side_delta
            if new_left == 0 or new_right == 0:
                if objective is Objective.MIN_QUOTIENT_CUT:
                    continue
            score = objective.score(p.cut + path.flip_cost, new_left, new_right)
            if objective.better(score, current):
                self._flip(path.seq)
                self.stats["flips"] += 1
                self.stats["path_lengths"].append(len(path.seq))
                return True
        return False

    def run(self, p0: Partition | None = None, max_restarts: int | None = None) -> Partition:
        g, objective, cfg = self.g, self.objective, self.cfg
        if p0 is None:
            p0 = construct_w(g, objective, derive_seed(self.seed, 1, 0))
        t0 = time.perf_counter()
        deadline = None if cfg.time_budget is None else t0 + cfg.time_budget
        best = p0.copy()
        best_score = best.score(objective)
        self._load(p0.copy())
        restart = 0
        no_gain_restarts = 0
        try:
            while True:
                stale = 0
                while stale < cfg.stale_iters:
                    if deadline is not None and time.perf_counter() >= deadline:
                        return best
                    if self.iterate():
                        stale = 0
                        score = self.p.score(objective)
                        if objective.better(score, best_score):
                            best, best_score = self.p.copy(), score
                            no_gain_restarts = -1  # this restart improved the incumbent
                    else:
                        stale += 1
                no_gain_restarts = 0 if no_gain_restarts < 0 else no_gain_restarts + 1
                if cfg.stale_restarts is not None and no_gain_restarts >= cfg.stale_restarts:
                    return best
                restart += 1
                if max_restarts is not None and restart > max_restarts:
                    return best
                if deadline is not None and time.perf_counter() >= deadline:
                    return best
                self.stats["restarts"] = restart
                self._load(construct_w(g, objective, derive_seed(self.seed, 1, restart)))
        finally:
            self.stats["loop_time"] = time.perf_counter() - t0


def po_optimize(
    g: Graph,
    p0: Partition | None,
    objective: Objective,
    cfg: PoConfig | None = None,
    seed: int = 0,
    max_restarts: int | None = None,
    stats: dict | None = None,
) -> Partition:
    """Run Path Optimization from ``p0`` (a W partitioning if None) with W restarts."""
    opt = PathOptimizer(g, objective, cfg, seed)
    best = opt.run(p0, max_restarts=max_restarts)
    if stats is not None:
        stats.update(opt.stats)
        lengths = opt.stats["path_lengths"]
        stats["mean_path_length"] = float(np.mean(lengths)) if lengths else 0.0
    return best
