"""Graphs, two-way partitionings and the cut arithmetic shared by all heuristics."""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

LEFT = 0
RIGHT = 1

# Recount the cut after every incremental update. Expensive (O(m) per
# update); switched on by the test-suite or PATHOPT_DEBUG=1.
DEBUG_CHECKS = os.environ.get("PATHOPT_DEBUG", "") not in ("", "0")


class Objective(enum.Enum):
    MAX_CUT = "maxcut"
    MIN_QUOTIENT_CUT = "quotient"

    @classmethod
    def parse(cls, text: str) -> "Objective":
        aliases = {
            "maxcut": cls.MAX_CUT,
            "max_cut": cls.MAX_CUT,
            "quotient": cls.MIN_QUOTIENT_CUT,
            "min_quotient_cut": cls.MIN_QUOTIENT_CUT,
            "quotientcut": cls.MIN_QUOTIENT_CUT,
        }
        try:
            return aliases[text.lower()]
        except KeyError:
            raise ValueError(f"unknown objective {text!r}") from None

    @property
    def maximize(self) -> bool:
        return self is Objective.MAX_CUT

    def score(self, cut: int, size_left: int, size_right: int) -> float:
        """Objective value of a state; +inf for a quotient with an empty side."""
        if self is Objective.MAX_CUT:
            return float(cut)
        smaller = min(size_left, size_right)
        if smaller == 0:
            return float("inf")
        return cut / smaller

    def better(self, a: float, b: float) -> bool:
        """Strictly better. Quotients of small integers compare exactly as floats."""
        return a > b if self is Objective.MAX_CUT else a < b

    def worst(self) -> float:
        return float("-inf") if self is Objective.MAX_CUT else float("inf")


@dataclass
class Graph:
    """Undirected simple graph. Immutable by convention once built."""

    n: int
    edges: list[tuple[int, int]]
    adj: list[list[int]]
    coords: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.edges)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        coords: np.ndarray | None = None,
        meta: dict | None = None,
    ) -> "Graph":
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            e = (u, v) if u < v else (v, u)
            if e in norm:
                raise ValueError(f"duplicate edge {e}")
            norm.add(e)
        ordered = sorted(norm)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in ordered:
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        if coords is not None:
            coords = np.asarray(coords, dtype=float)
            if coords.shape != (n, 2):
                raise ValueError(f"coords must have shape ({n}, 2), got {coords.shape}")
        return cls(n=n, edges=ordered, adj=adj, coords=coords, meta=dict(meta or {}))

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def check(self) -> None:
        """Assert the structural invariants (tests and file loading)."""
        seen = set()
        for u, v in self.edges:
            assert u < v, (u, v)
            assert (u, v) not in seen, (u, v)
            seen.add((u, v))
        assert sum(len(a) for a in self.adj) == 2 * self.m
        for u, nbrs in enumerate(self.adj):
            assert len(set(nbrs)) == len(nbrs), u
            for v in nbrs:
                assert u != v
                assert (min(u, v), max(u, v)) in seen


class Partition:
    """Two-way vertex assignment with cached side sizes and cut count.

    ``side[v]`` is LEFT (0) or RIGHT (1). Algorithms may toggle vertices via
    :meth:`move` when they already know the cut delta, or :meth:`flip`
    which computes it from the adjacency list.
    """

    __slots__ = ("side", "size_left", "size_right", "cut")

    def __init__(self, side: list[int], size_left: int, size_right: int, cut: int):
        self.side = side
        self.size_left = size_left
        self.size_right = size_right
        self.cut = cut

    @classmethod
    def from_sides(cls, g: Graph, side: Sequence[int]) -> "Partition":
        if len(side) != g.n:
            raise ValueError(f"partition has {len(side)} labels, graph has {g.n} vertices")
        side = [int(s) for s in side]
        for v, s in enumerate(side):
            if s not in (LEFT, RIGHT):
                raise ValueError(f"vertex {v} has invalid side label {s}")
        right = sum(side)
        return cls(side, g.n - right, right, recount_cut(g, side))

    @classmethod
    def from_left_set(cls, g: Graph, left: Iterable[int]) -> "Partition":
        side = [RIGHT] * g.n
        for v in left:
            side[v] = LEFT
        return cls.from_sides(g, side)

    @property
    def n(self) -> int:
        return len(self.side)

    def copy(self) -> "Partition":
        return Partition(self.side.copy(), self.size_left, self.size_right, self.cut)

    def left_set(self) -> set[int]:
        return {v for v, s in enumerate(self.side) if s == LEFT}

    def move(self, v: int, cut_delta: int) -> None:
        if self.side[v] == LEFT:
            self.side[v] = RIGHT
            self.size_left -= 1
            self.size_right += 1
        else:
            self.side[v] = LEFT
            self.size_left += 1
            self.size_right -= 1
        self.cut += cut_delta

    def flip(self, g: Graph, v: int) -> None:
        self.move(v, gain(g, self, v))
        if DEBUG_CHECKS:
            self.verify(g)

    def verify(self, g: Graph) -> None:
        right = sum(self.side)
        assert self.size_right == right and self.size_left == g.n - right, "size cache stale"
        assert self.cut == recount_cut(g, self.side), "cut cache stale"

    def score(self, objective: Objective) -> float:
        return objective.score(self.cut, self.size_left, self.size_right)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return (
            self.side == other.side
            and self.cut == other.cut
            and self.size_left == other.size_left
            and self.size_right == other.size_right
        )

    def __repr__(self) -> str:
        return f"Partition(n={self.n}, left={self.size_left}, right={self.size_right}, cut={self.cut})"


def recount_cut(g: Graph, side: Sequence[int]) -> int:
    return sum(1 for u, v in g.edges if side[u] != side[v])


def _check_sizes(g: Graph, p: Partition) -> None:
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} vertices, graph has {g.n}")


def cut_count(g: Graph, p: Partition) -> int:
    _check_sizes(g, p)
    return p.cut


def quotient_cost(g: Graph, p: Partition) -> float:
    """Cut edges divided by the size of the smaller side."""
    _check_sizes(g, p)
    smaller = min(p.size_left, p.size_right)
    if smaller == 0:
        raise ValueError("quotient cost undefined: one side is empty")
    return p.cut / smaller


def critical_counts(g: Graph, p: Partition, v: int) -> tuple[int, int]:
    """(same-side neighbours, opposite-side neighbours) of ``v``."""
    if not 0 <= v < g.n:
        raise IndexError(v)
    side = p.side
    sv = side[v]
    same = sum(1 for w in g.adj[v] if side[w] == sv)
    return same, len(g.adj[v]) - same


def gain(g: Graph, p: Partition, v: int) -> int:
    """Change in cut size if ``v`` alone switches sides."""
    side = p.side
    sv = side[v]
    d = 0
    for w in g.adj[v]:
        d += 1 if side[w] == sv else -1
    return d


def all_gains(g: Graph, side: Sequence[int]) -> list[int]:
    gains = [0] * g.n
    for u, v in g.edges:
        if side[u] == side[v]:
            gains[u] += 1
            gains[v] += 1
        else:
            gains[u] -= 1
            gains[v] -= 1
    return gains


def flip_flop_delta(g: Graph, p: Partition, vs: Iterable[int]) -> int:
    """Cut change from toggling every vertex of ``vs`` simultaneously."""
    members = set(vs)
    side = p.side
    d = 0
    for v in members:
        sv = side[v]
        for w in g.adj[v]:
            if w not in members:
                d += 1 if side[w] == sv else -1
    return d


def apply_flip_flop(g: Graph, p: Partition, vs: Sequence[int], inplace: bool = False) -> Partition:
    """Toggle the side of every vertex in ``vs``; edges inside ``vs`` keep their status."""
    _check_sizes(g, p)
    members = set(vs)
    if len(members) != len(vs):
        raise ValueError("duplicate vertex in flip-flop set")
    d = flip_flop_delta(g, p, members)
    out = p if inplace else p.copy()
    side = out.side
    moved_right = 0
    for v in members:
        if side[v] == LEFT:
            side[v] = RIGHT
            moved_right += 1
        else:
            side[v] = LEFT
            moved_right -= 1
    out.size_left -= moved_right
    out.size_right += moved_right
    out.cut += d
    if DEBUG_CHECKS:
        out.verify(g)
    return out
