"""Near-greedy analysis of partitionings and the probabilistic-greedy (PG) heuristic.

A target partitioning is replayed as a constructive placement sequence; each
placement is labelled greedy or non-greedy by comparing the cut it adds on
its target side with the cut it would add on the other side. Averaging the
non-greedy indicator over an ensemble of graphs gives the ng-function of the
graph class, which is fitted by ``a + b / sqrt(i)`` and drives PG.
"""

from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .generators import GenSpec, generate
from .graph import LEFT, Graph, Objective, Partition
from .initial import DiffMode, DiffState, TieBreak, construct_w, greedy_side, select_diff
from .rng import derive_seed, make_rng

GREEDY = 0
NONGREEDY = 1
N_BINS = 100


class Ordering(enum.Enum):
    RANDOM = "random"
    MAX_DIFF_MAX_DEGREE = "maxdiff"


@dataclass
class PlacementTrace:
    order: list[int]
    labels: list[int]
    target: Partition
    # average degree of the subgraph induced by unplaced vertices, before each placement
    unplaced_avg_degree: list[float] = field(default_factory=list)

    @property
    def nongreedy_fraction(self) -> float:
        return sum(self.labels) / len(self.labels) if self.labels else 0.0


def replay_label(
    g: Graph,
    target: Partition,
    ordering: Ordering = Ordering.MAX_DIFF_MAX_DEGREE,
    objective: Objective = Objective.MAX_CUT,
    seed: int = 0,
) -> PlacementTrace:
    """Replay ``target`` placement by placement and label each step.

    A step is greedy when the cut it adds on its target side is at least as
    good as what the other side would add (ties count as greedy).
    """
    if target.n != g.n:
        raise ValueError("target partition does not match the graph")
    rng = make_rng(seed)
    state = DiffState(g)
    side = target.side
    adj = g.adj
    maximize = objective is Objective.MAX_CUT
    random_order = rng.permutation(g.n).tolist() if ordering is Ordering.RANDOM else None
    order, labels, avg_deg = [], [], []
    unplaced_edges = g.m
    for i in range(g.n):
        if random_order is not None:
            v = random_order[i]
        else:
            v = select_diff(state, DiffMode.MAX_DIFF, TieBreak.MAX_DEGREE_THEN_RANDOM, rng)
        avg_deg.append(2.0 * unplaced_edges / (g.n - i))
        nl, nr = state.n_left[v], state.n_right[v]
        if side[v] == LEFT:
            added, other = nr, nl
        else:
            added, other = nl, nr
        greedy = added >= other if maximize else added <= other
        labels.append(GREEDY if greedy else NONGREEDY)
        order.append(v)
        unplaced_edges -= len(adj[v]) - nl - nr
        state.place(v, side[v])
    return PlacementTrace(order, labels, target, avg_deg)


def fit_ng(raw: Sequence[float]) -> tuple[float, float, float, float]:
    """Least-squares fit of raw[i-1] ~ a + b / sqrt(i), i = 1..len(raw).

    Returns (a, b, R^2, residual standard error).
    """
    y = np.asarray(raw, dtype=float)
    if len(y) < 2:
        raise ValueError("need at least two points to fit")
    x = 1.0 / np.sqrt(np.arange(1, len(y) + 1))
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise ValueError("degenerate regressor")
    b = float(np.sum((x - xm) * (y - ym)) / sxx)
    a = float(ym - b * xm)
    resid = y - (a + b * x)
    sse = float(np.sum(resid**2))
    sst = float(np.sum((y - ym) ** 2))
    r2 = 1.0 - sse / sst if sst > 0 else 1.0
    stderr = math.sqrt(sse / (len(y) - 2)) if len(y) > 2 else 0.0
    return a, b, r2, stderr


def percentile_bins(raw: Sequence[float], bins: int = N_BINS) -> np.ndarray:
    """Mean of raw over equal-width bins of the placement percentile (i-1)/n."""
    y = np.asarray(raw, dtype=float)
    n = len(y)
    idx = (np.arange(n) * bins) // n
    sums = np.bincount(idx, weights=y, minlength=bins)
    counts = np.bincount(idx, minlength=bins)
    out = np.empty(bins)
    for b in range(bins):
        if counts[b]:
            out[b] = sums[b] / counts[b]
        else:
            out[b] = y[min(n - 1, int((b + 0.5) * n / bins))]
    return out


@dataclass
class NgProfile:
    raw: np.ndarray
    probs: np.ndarray
    a: float
    b: float
    r_squared: float
    stderr: float
    ensemble_size: int
    unplaced_avg_degree: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.raw)

    @property
    def nongreedy_fraction(self) -> float:
        return float(np.mean(self.raw))

    @classmethod
    def from_raw(cls, raw, ensemble_size: int, unplaced_avg_degree=None) -> "NgProfile":
        raw = np.asarray(raw, dtype=float)
        if len(raw) >= 2:
            a, b, r2, se = fit_ng(raw)
        else:
            a, b, r2, se = float(raw[0]) if len(raw) else 0.0, 0.0, 1.0, 0.0
        return cls(raw, percentile_bins(raw) if len(raw) else np.zeros(N_BINS), a, b, r2, se,
                   ensemble_size, unplaced_avg_degree)

    @classmethod
    def from_coefficients(cls, a: float, b: float, n: int) -> "NgProfile":
        """Profile defined only by fitted coefficients; raw holds the clamped fit."""
        i = np.arange(1, n + 1)
        raw = np.clip(a + b / np.sqrt(i), 0.0, 1.0)
        return cls(raw, percentile_bins(raw), a, b, float("nan"), float("nan"), 0)

    def fitted(self, i: int) -> float:
        return min(1.0, max(0.0, self.a + self.b / math.sqrt(i)))

    def ng_function(self, empirical: bool = False) -> Callable[[int], float]:
        """F(i) for 1-based placement index i; fitted (clamped) or the empirical table."""
        if not empirical:
            return self.fitted
        raw = self.raw

        def table(i: int) -> float:
            return float(raw[min(i, len(raw)) - 1])

        return table


# Mean coefficients reported for G(500, 0.05) max-cut partitionings; used
# when PG runs without an estimated profile.
DEFAULT_A = -0.0292
DEFAULT_B = 0.3991


def run_oracle(name: str, g: Graph, objective: Objective, seed: int, restarts: int = 4) -> Partition:
    """Best partitioning found by one of the local-search heuristics with a fixed restart count."""
    if name in ("fm", "kl"):
        from .fm import fm_optimize

        return fm_optimize(g, None, objective, seed=seed, max_restarts=restarts)
    if name == "po":
        from .po import po_optimize

        return po_optimize(g, None, objective, seed=seed, max_restarts=restarts)
    if name == "sa":
        from .anneal import sa_run

        return sa_run(g, objective, seed=seed, max_runs=restarts + 1)
    raise ValueError(f"unknown oracle {name!r}")


def _member(args):
    spec, objective, oracle, restarts, orderings, member_seed = args
    g = generate(spec)
    target = run_oracle(oracle, g, objective, derive_seed(member_seed, 1), restarts)
    out = {}
    avg = None
    for k, ordering in enumerate(orderings):
        tr = replay_label(g, target, ordering, objective, derive_seed(member_seed, 2, k))
        out[ordering] = np.asarray(tr.labels, dtype=np.uint8)
        if avg is None:
            avg = np.asarray(tr.unplaced_avg_degree)
    return out, avg, target.cut


@dataclass
class Ensemble:
    labels: dict  # Ordering -> (ensemble_size, n) uint8 array
    unplaced_avg_degree: np.ndarray  # mean over members, per index (first ordering)
    cuts: np.ndarray

    def profile(self, ordering: Ordering) -> NgProfile:
        lab = self.labels[ordering]
        return NgProfile.from_raw(lab.mean(axis=0), lab.shape[0], self.unplaced_avg_degree)


def collect_ensemble(
    spec: GenSpec,
    objective: Objective = Objective.MAX_CUT,
    oracle: str = "fm",
    ensemble_size: int = 1000,
    seed: int = 0,
    orderings: Sequence[Ordering] = (Ordering.MAX_DIFF_MAX_DEGREE,),
    oracle_restarts: int = 4,
    jobs: int = 1,
    progress: Callable[[int], None] | None = None,
) -> Ensemble:
    """Generate graphs, optimise each with the oracle and replay-label the result."""
    if ensemble_size < 1:
        raise ValueError("ensemble_size must be >= 1")
    orderings = tuple(orderings)
    tasks = [
        (spec.with_seed(derive_seed(seed, 0, k)), objective, oracle, oracle_restarts, orderings, derive_seed(seed, 1, k))
        for k in range(ensemble_size)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_member, tasks, chunksize=4))
    else:
        results = []
        for k, t in enumerate(tasks):
            results.append(_member(t))
            if progress is not None:
                progress(k + 1)
    labels = {o: np.stack([r[0][o] for r in results]) for o in orderings}
    avg = np.mean(np.stack([r[1] for r in results]), axis=0)
    cuts = np.array([r[2] for r in results])
    return Ensemble(labels, avg, cuts)


def estimate_ng(
    spec: GenSpec,
    objective: Objective = Objective.MAX_CUT,
    oracle: str = "fm",
    ensemble_size: int = 1000,
    seed: int = 0,
    ordering: Ordering = Ordering.MAX_DIFF_MAX_DEGREE,
    oracle_restarts: int = 4,
    jobs: int = 1,
) -> NgProfile:
    ens = collect_ensemble(spec, objective, oracle, ensemble_size, seed, (ordering,), oracle_restarts, jobs)
    return ens.profile(ordering)


def early_share(labels: np.ndarray, fraction: float = 0.5) -> float:
    """Share of non-greedy labels that fall in the first ``fraction`` of placements."""
    lab = np.asarray(labels)
    total = lab.sum()
    if total == 0:
        return 1.0
    cutoff = int(math.ceil(fraction * lab.shape[-1]))
    return float(lab[..., :cutoff].sum() / total)


def degree_crossing_index(unplaced_avg_degree: Sequence[float], level: float = 1.0) -> int:
    """First 0-based placement index at which the unplaced average degree drops below ``level``."""
    d = np.asarray(unplaced_avg_degree)
    below = np.flatnonzero(d < level)
    return int(below[0]) if len(below) else len(d)


def _as_ng(profile) -> Callable[[int], float]:
    if isinstance(profile, NgProfile):
        return profile.ng_function()
    if callable(profile):
        return profile
    raise TypeError("profile must be an NgProfile or a callable F(i)")


def pg_construct(g: Graph, objective: Objective, profile, seed: int) -> Partition:
    """Max-diff/max-degree construction that goes non-greedy at step i with probability F(i)."""
    F = _as_ng(profile)
    rng = make_rng(seed)
    state = DiffState(g)
    maximize = objective is Objective.MAX_CUT
    coins = rng.random(g.n).tolist()
    for i in range(g.n):
        v = select_diff(state, DiffMode.MAX_DIFF, TieBreak.MAX_DEGREE_THEN_RANDOM, rng)
        cut_if_left, cut_if_right = state.n_right[v], state.n_left[v]
        if cut_if_left == cut_if_right:
            s = greedy_side(state, v, objective, rng)
        else:
            left_better = cut_if_left > cut_if_right if maximize else cut_if_left < cut_if_right
            better = LEFT if left_better else 1 - LEFT
            s = 1 - better if coins[i] < F(i + 1) else better
        state.place(v, s)
    return state.partition()


def pg_run(
    g: Graph,
    objective: Objective,
    profile,
    time_budget: float | None = None,
    seed: int = 0,
    max_restarts: int | None = None,
    stats: dict | None = None,
) -> Partition:
    """Best of repeated ``pg_construct`` runs within the budget / restart count."""
    if time_budget is None and max_restarts is None:
        max_restarts = 1
    F = _as_ng(profile)
    t0 = time.perf_counter()
    deadline = None if time_budget is None else t0 + time_budget
    best = None
    k = 0
    while True:
        p = pg_construct(g, objective, F, derive_seed(seed, k))
        k += 1
        if best is None or objective.better(p.score(objective), best.score(objective)):
            best = p
        if max_restarts is not None and k >= max_restarts:
            break
        if deadline is not None and time.perf_counter() >= deadline:
            break
    if stats is not None:
        stats.update(restarts=k, loop_time=time.perf_counter() - t0)
    return best


def w_run(
    g: Graph,
    objective: Objective,
    time_budget: float | None = None,
    seed: int = 0,
    max_restarts: int | None = None,
    stats: dict | None = None,
) -> Partition:
    """Best of repeated greedy W constructions (the pure-greedy baseline for PG)."""
    if time_budget is None and max_restarts is None:
        max_restarts = 1
    t0 = time.perf_counter()
    deadline = None if time_budget is None else t0 + time_budget
    best = None
    k = 0
    while True:
        p = construct_w(g, objective, derive_seed(seed, k))
        k += 1
        if best is None or objective.better(p.score(objective), best.score(objective)):
            best = p
        if max_restarts is not None and k >= max_restarts:
            break
        if deadline is not None and time.perf_counter() >= deadline:
            break
    if stats is not None:
        stats.update(restarts=k, loop_time=time.perf_counter() - t0)
    return best
