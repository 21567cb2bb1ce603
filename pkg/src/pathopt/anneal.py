"""Single-vertex-flip simulated annealing for max_cut and min_quotient_cut.

Quotient cut is annealed on a surrogate cost (cut plus a quadratic
imbalance penalty); the incumbent is still chosen by the true quotient.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from . import graph as _graph
from .graph import LEFT, Graph, Objective, Partition, all_gains
from .initial import get_initializer, init_random
from .rng import derive_seed, make_rng


@dataclass
class SaConfig:
    cooling_ratio: float = 0.95
    temp_length_factor: float = 16.0
    init_accept_target: float = 0.4
    freeze_stages: int = 5
    freeze_threshold: float = 0.02
    balance_alpha: float = 2.0  # tuned on geometric quotient-cut instances
    long_run: bool = False
    trial_factor: float = 10.0
    t_freeze: float = 0.01
    exclude_trial: bool = True  # trial run not charged to the time budget

    def __post_init__(self):
        if not 0.0 < self.cooling_ratio < 1.0:
            raise ValueError("cooling_ratio must lie in (0, 1)")
        if self.temp_length_factor <= 0 or self.trial_factor <= 0:
            raise ValueError("length factors must be positive")
        if not 0.0 < self.init_accept_target < 1.0:
            raise ValueError("init_accept_target must lie in (0, 1)")
        if self.freeze_stages < 1:
            raise ValueError("freeze_stages must be >= 1")


def sa_cost(g: Graph, p: Partition, objective: Objective, alpha: float = 2.0) -> float:
    if objective is Objective.MAX_CUT:
        return -float(p.cut)
    imbalance = p.size_left - p.size_right
    return p.cut + alpha * imbalance * imbalance / g.n


def flip_delta(
    gain_v: int, side_v: int, size_left: int, size_right: int, n: int, objective: Objective, alpha: float
) -> float:
    """Cost change of flipping one vertex, from its cut gain and the side sizes."""
    if objective is Objective.MAX_CUT:
        return -gain_v
    d = size_left - size_right
    d2 = d - 2 if side_v == LEFT else d + 2
    return gain_v + alpha * (d2 * d2 - d * d) / n


def temperature_for(mean_uphill: float, target: float) -> float:
    return -mean_uphill / math.log(target)


def sa_trial_init(g: Graph, objective: Objective, cfg: SaConfig, seed: int) -> float:
    """Starting temperature from sampled uphill moves around a random partitioning."""
    rng = make_rng(seed)
    p = init_random(g, derive_seed(seed, 7))
    gains = all_gains(g, p.side)
    samples = max(1, int(cfg.trial_factor * g.n))
    vs = rng.integers(0, g.n, samples).tolist() if g.n else []
    uphill = []
    for v in vs:
        d = flip_delta(gains[v], p.side[v], p.size_left, p.size_right, g.n, objective, cfg.balance_alpha)
        if d > 0:
            uphill.append(d)
    if not uphill:
        return 1.0
    return temperature_for(sum(uphill) / len(uphill), cfg.init_accept_target)


class _Annealer:
    def __init__(self, g: Graph, objective: Objective, cfg: SaConfig, rng):
        self.g = g
        self.objective = objective
        self.cfg = cfg
        self.rng = rng
        self.stages = 0
        self.proposals = 0

    def anneal(self, p: Partition, t0: float, ratio: float, deadline, long_run: bool, on_stage=None) -> Partition:
        g, objective, cfg, rng = self.g, self.objective, self.cfg, self.rng
        n = g.n
        if n == 0:
            return p.copy()
        adj, side = g.adj, p.side
        gains = all_gains(g, side)
        maximize = objective is Objective.MAX_CUT
        alpha = cfg.balance_alpha
        score_of = objective.score
        length = max(1, int(cfg.temp_length_factor * n))
        exp = math.exp
        clock = time.perf_counter

        best_score = p.score(objective)
        best = p.copy()
        at_best = True
        T = t0
        frozen = 0
        while True:
            stage_start = clock()
            vs = rng.integers(0, n, length).tolist()
            us = rng.random(length).tolist()
            accepted = 0
            improved = False
            out_of_time = False
            for i in range(length):
                if deadline is not None and not (i & 1023) and clock() >= deadline:
                    out_of_time = True
                    break
                v = vs[i]
                gv = gains[v]
                sv = side[v]
                if maximize:
                    delta = -gv
                else:
                    d = p.size_left - p.size_right
                    d2 = d - 2 if sv == LEFT else d + 2
                    delta = gv + alpha * (d2 * d2 - d * d) / n
                if delta > 0 and us[i] >= exp(-delta / T):
                    continue
                new_score = score_of(p.cut + gv, p.size_left - (1 if sv == LEFT else -1),
                                     p.size_right + (1 if sv == LEFT else -1))
                if at_best and not (new_score == best_score or objective.better(new_score, best_score)):
                    best = p.copy()
                    at_best = False
                for w in adj[v]:
                    gains[w] += -2 if side[w] == sv else 2
                p.move(v, gv)
                gains[v] = -gv
                accepted += 1
                if objective.better(new_score, best_score):
                    best_score = new_score
                    at_best = True
                    improved = True
            self.proposals += i if out_of_time else length
            self.stages += 1
            if _graph.DEBUG_CHECKS:
                p.verify(g)
                assert gains == all_gains(g, side)
            if on_stage is not None:
                res = on_stage(self, T, clock() - stage_start)
                if res is not None:
                    ratio = res
            if out_of_time:
                break
            if not long_run:
                # zero-delta plateau moves can keep acceptance up forever; a cold stage counts as frozen
                if accepted / length < cfg.freeze_threshold or T < cfg.t_freeze:
                    frozen += 1
                else:
                    frozen = 0
                if improved:
                    frozen = 0
                if frozen >= cfg.freeze_stages:
                    break
            elif deadline is None and T < cfg.t_freeze:
                break
            T *= ratio
        if at_best:
            best = p.copy()
        return best


def sa_run(
    g: Graph,
    objective: Objective,
    cfg: SaConfig | None = None,
    time_budget: float | None = None,
    seed: int = 0,
    init: str = "random",
    p0: Partition | None = None,
    max_runs: int | None = None,
    stats: dict | None = None,
) -> Partition:
    """Anneal until the budget (or ``max_runs`` full anneals) is spent; return the best state.

    With ``cfg.long_run`` and a time budget the whole budget goes to one
    anneal whose cooling ratio is stretched, after timing the first stage,
    so that the temperature reaches ``cfg.t_freeze`` at the deadline.
    """
    cfg = cfg or SaConfig()
    init_gen = get_initializer(init)
    trial_start = time.perf_counter()
    t0 = sa_trial_init(g, objective, cfg, derive_seed(seed, 2))
    trial_time = time.perf_counter() - trial_start
    if p0 is None:
        p0 = init_gen(g, objective, derive_seed(seed, 1, 0))
    if time_budget is None and max_runs is None:
        max_runs = 1
    start = time.perf_counter()
    budget = time_budget
    if budget is not None and not cfg.exclude_trial:
        budget = max(0.0, budget - trial_time)
    deadline = None if budget is None else start + budget
    rng = make_rng(derive_seed(seed, 3))
    ann = _Annealer(g, objective, cfg, rng)
    long_run = cfg.long_run and deadline is not None
    state = {"ratio": cfg.cooling_ratio}

    def stretch(a, T, stage_time):
        # After the first stage, spread the remaining schedule over the budget.
        if a.stages == 1:
            remaining = max(deadline - time.perf_counter(), 0.0)
            n_stages = max(1.0, remaining / max(stage_time, 1e-9))
            ratio = (cfg.t_freeze / T) ** (1.0 / n_stages) if T > cfg.t_freeze else cfg.cooling_ratio
            state["ratio"] = min(ratio, 1.0 - 1e-12)
            return state["ratio"]
        return None

    best = None
    runs = 0
    p = p0.copy()
    while True:
        result = ann.anneal(p, t0, cfg.cooling_ratio, deadline, long_run, on_stage=stretch if long_run else None)
        runs += 1
        if best is None or objective.better(result.score(objective), best.score(objective)):
            best = result
        if long_run:
            break
        if deadline is not None and time.perf_counter() >= deadline:
            break
        if max_runs is not None and runs >= max_runs:
            break
        p = init_gen(g, objective, derive_seed(seed, 1, runs))
    if stats is not None:
        stats.update(
            runs=runs,
            stages=ann.stages,
            proposals=ann.proposals,
            t0=t0,
            cooling_ratio=state["ratio"],
            trial_time=trial_time,
            loop_time=time.perf_counter() - start,
        )
    return best
