"""Seeded random graph generators.

Five classes: G(n, p) random graphs, random geometric graphs on the unit
square, random regular graphs, and the two planted-bisection variants
("unbalanced" random and regular graphs) used for the near-greedy ensembles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from .graph import Graph
from .rng import derive_seed, make_rng

RETRY_CAP = 10_000
_ROUND_CAP = 1_000

KINDS = ("random", "geometric", "regular", "unbalanced_random", "unbalanced_regular")
_REQUIRED = {
    "random": ("p",),
    "geometric": ("d",),
    "regular": ("r",),
    "unbalanced_random": ("p1", "p2"),
    "unbalanced_regular": ("k1", "k2"),
}
_PARAMS = ("p", "d", "r", "p1", "p2", "k1", "k2")


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    seed: int = 0
    p: Optional[float] = None
    d: Optional[float] = None
    r: Optional[int] = None
    p1: Optional[float] = None
    p2: Optional[float] = None
    k1: Optional[int] = None
    k2: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown graph kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        need = _REQUIRED[self.kind]
        for name in _PARAMS:
            val = getattr(self, name)
            if name in need and val is None:
                raise ValueError(f"kind={self.kind} requires {name}")
            if name not in need and val is not None:
                raise ValueError(f"kind={self.kind} does not take {name}")
        for name in ("p", "p1", "p2"):
            val = getattr(self, name)
            if val is not None and not 0.0 <= val <= 1.0:
                raise ValueError(f"{name}={val} outside [0, 1]")
        if self.d is not None and self.d <= 0:
            raise ValueError("d must be positive")

    def with_seed(self, seed: int) -> "GenSpec":
        kw = {f.name: getattr(self, f.name) for f in fields(self)}
        kw["seed"] = seed
        return GenSpec(**kw)

    def format(self) -> str:
        parts = [f"kind={self.kind}", f"n={self.n}"]
        for name in _REQUIRED[self.kind]:
            parts.append(f"{name}={getattr(self, name)!r}")
        parts.append(f"seed={self.seed}")
        return "# genspec " + " ".join(parts)

    @classmethod
    def parse(cls, line: str) -> "GenSpec":
        text = line.strip()
        if text.startswith("#"):
            text = text[1:].strip()
        if text.startswith("genspec"):
            text = text[len("genspec"):]
        kw: dict = {}
        for tok in text.split():
            if "=" not in tok:
                raise ValueError(f"malformed genspec token {tok!r}")
            key, val = tok.split("=", 1)
            if key in ("kind",):
                kw[key] = val
            elif key in ("n", "seed", "r", "k1", "k2"):
                kw[key] = int(val)
            elif key in ("p", "d", "p1", "p2"):
                kw[key] = float(val)
            else:
                raise ValueError(f"unknown genspec key {key!r}")
        if "kind" not in kw or "n" not in kw:
            raise ValueError("genspec needs kind= and n=")
        return cls(**kw)


def generate(spec: GenSpec) -> Graph:
    if spec.kind == "random":
        g = gen_random(spec.n, spec.p, spec.seed)
    elif spec.kind == "geometric":
        g = gen_geometric(spec.n, spec.d, spec.seed)
    elif spec.kind == "regular":
        g = gen_regular(spec.n, spec.r, spec.seed)
    elif spec.kind == "unbalanced_random":
        g = gen_unbalanced_random(spec.n, spec.p1, spec.p2, spec.seed)
    else:
        g = gen_unbalanced_regular(spec.n, spec.k1, spec.k2, spec.seed)
    g.meta["genspec"] = spec
    return g


def gen_random(n: int, p: float, seed: int) -> Graph:
    rng = make_rng(seed)
    edges = []
    for u in range(n - 1):
        hits = np.flatnonzero(rng.random(n - u - 1) < p)
        edges.extend((u, int(v)) for v in hits + (u + 1))
    return Graph.from_edges(n, edges)


def geometric_from_points(points, d: float) -> Graph:
    """Connect every pair of points at Euclidean distance strictly below ``d``."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n < 2:
        return Graph.from_edges(n, [], coords=pts.reshape(n, 2))
    pairs = cKDTree(pts).query_pairs(d, output_type="ndarray")
    if len(pairs):
        dist = np.linalg.norm(pts[pairs[:, 0]] - pts[pairs[:, 1]], axis=1)
        pairs = pairs[dist < d]
    return Graph.from_edges(n, map(tuple, pairs.tolist()), coords=pts)


def gen_geometric(n: int, d: float, seed: int) -> Graph:
    rng = make_rng(seed)
    return geometric_from_points(rng.random((n, 2)), d)


def expected_geometric_degree(n: int, d: float) -> float:
    """Mean degree of a geometric graph on the unit square, boundary effects included (d <= 1)."""
    return (n - 1) * (math.pi * d**2 - 8.0 * d**3 / 3.0 + d**4 / 2.0)


def geometric_threshold(n: int, avg_degree: float) -> float:
    """Distance threshold giving the requested expected average degree."""
    if n < 2 or avg_degree <= 0:
        raise ValueError("need n >= 2 and a positive degree")
    if avg_degree >= expected_geometric_degree(n, 1.0):
        raise ValueError("degree too large for a threshold <= 1")
    return brentq(lambda d: expected_geometric_degree(n, d) - avg_degree, 1e-12, 1.0)


def _suitable(edges: set, left: list[int], right: list[int] | None) -> bool:
    # Whether some admissible pair remains among the leftover stubs.
    if right is None:
        nodes = sorted(set(left))
        for i, u in enumerate(nodes):
            for v in nodes[i + 1:]:
                if (u, v) not in edges:
                    return True
        return False
    for u in set(left):
        for v in set(right):
            if (min(u, v), max(u, v)) not in edges:
                return True
    return False


def _pair_stubs(rng: np.random.Generator, left: np.ndarray, right: np.ndarray | None = None):
    """Random stub matching, re-pairing only the stubs that formed loops or repeats.

    ``right=None`` pairs ``left`` with itself (configuration model); otherwise
    each left stub is matched to a right stub (bipartite configuration model).
    Returns the edge set, or None when the leftover stubs admit no simple
    completion.
    """
    edges: set[tuple[int, int]] = set()
    for _ in range(_ROUND_CAP):
        if right is None:
            s = rng.permutation(left)
            a, b = s[0::2].tolist(), s[1::2].tolist()
        else:
            a, b = left.tolist(), rng.permutation(right).tolist()
        bad_a, bad_b = [], []
        for u, v in zip(a, b):
            e = (u, v) if u < v else (v, u)
            if u != v and e not in edges:
                edges.add(e)
            else:
                bad_a.append(u)
                bad_b.append(v)
        if not bad_a:
            return edges
        if right is None:
            left = np.array(bad_a + bad_b, dtype=np.int64)
            if not _suitable(edges, left.tolist(), None):
                return None
        else:
            if not _suitable(edges, bad_a, bad_b):
                return None
            left = np.array(bad_a, dtype=np.int64)
            right = np.array(bad_b, dtype=np.int64)
    return None


def _regular_edges(rng, vertices: np.ndarray, r: int) -> set:
    if r == 0:
        return set()
    stubs = np.repeat(vertices, r)
    for _ in range(RETRY_CAP):
        edges = _pair_stubs(rng, stubs)
        if edges is not None:
            return edges
    raise RuntimeError(f"regular graph sampling exceeded {RETRY_CAP} attempts")


def gen_regular(n: int, r: int, seed: int) -> Graph:
    if r < 0 or r >= n:
        raise ValueError(f"infeasible degree r={r} for n={n} (need 0 <= r < n)")
    if (n * r) % 2:
        raise ValueError("n * r must be even")
    rng = make_rng(seed)
    return Graph.from_edges(n, _regular_edges(rng, np.arange(n), r))


def gen_unbalanced_random(n: int, p1: float, p2: float, seed: int) -> Graph:
    """Planted bisection: blocks [0, n//2) and [n//2, n), within-prob p1, cross-prob p2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = make_rng(seed)
    half = n // 2
    edges = []
    for u in range(n - 1):
        r = rng.random(n - u - 1)
        vs = np.arange(u + 1, n)
        prob = np.where((vs < half) == (u < half), p1, p2)
        edges.extend((u, int(v)) for v in vs[r < prob])
    return Graph.from_edges(n, edges, meta={"planted_split": half})


def gen_unbalanced_regular(n: int, k1: int, k2: int, seed: int) -> Graph:
    """k1-regular graph inside each half plus a k2-regular bipartite graph across them."""
    if n % 2:
        raise ValueError("n must be even")
    half = n // 2
    if not 0 <= k1 < half or (half * k1) % 2:
        raise ValueError(f"infeasible within-half degree k1={k1} for halves of {half}")
    if not 0 <= k2 <= half:
        raise ValueError(f"infeasible cross degree k2={k2} for halves of {half}")
    rng_a = make_rng(derive_seed(seed, 0))
    rng_b = make_rng(derive_seed(seed, 1))
    rng_x = make_rng(derive_seed(seed, 2))
    edges = set(_regular_edges(rng_a, np.arange(half), k1))
    edges |= _regular_edges(rng_b, np.arange(half, n), k1)
    if k2:
        left = np.repeat(np.arange(half), k2)
        right = np.repeat(np.arange(half, n), k2)
        for _ in range(RETRY_CAP):
            cross = _pair_stubs(rng_x, left, right)
            if cross is not None:
                break
        else:
            raise RuntimeError(f"bipartite sampling exceeded {RETRY_CAP} attempts")
        edges |= cross
    return Graph.from_edges(n, edges, meta={"planted_split": half})
