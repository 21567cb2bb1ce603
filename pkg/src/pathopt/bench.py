"""Timed best-of-many benchmark runs, confidence intervals and table/CSV output.

Each (graph, algorithm, trial) is one work item. Only the optimisation loop
is charged to the time budget; graph generation and the initial
partitioning are excluded, as is the SA starting-temperature trial unless
``SaConfig.exclude_trial`` is switched off.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import stats as _stats

from .anneal import SaConfig, sa_run
from .fm import fm_optimize
from .generators import GenSpec, generate
from .graph import Graph, Objective, Partition
from .initial import construct_w, default_initializer, get_initializer
from .neargreedy import DEFAULT_A, DEFAULT_B, NgProfile, pg_run, w_run
from .po import PoConfig, po_optimize
from .rng import derive_seed

NORMAL_SWITCH = 30
CSV_HEADER = ("algo", "graph", "seed", "objective", "score", "cuts", "time_s")
INTERVAL_HEADER = ("algo", "lo", "mean", "hi")


@dataclass
class CiSummary:
    mean: float
    sd: float
    lo: float
    hi: float
    n_samples: int
    level: float = 0.99
    method: str = "StudentT"  # or "Normal"


def confidence_interval(samples: Sequence[float], level: float = 0.99) -> CiSummary:
    """mean +/- q*sd/sqrt(n); q is the Normal quantile for n >= 30, Student's t otherwise."""
    x = np.asarray(samples, dtype=float)
    n = len(x)
    if n < 2:
        raise ValueError("confidence_interval needs at least 2 samples")
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    mean = float(x.mean())
    sd = float(x.std(ddof=1))
    upper = 1.0 - (1.0 - level) / 2.0
    if n >= NORMAL_SWITCH:
        q, method = float(_stats.norm.ppf(upper)), "Normal"
    else:
        q, method = float(_stats.t.ppf(upper, n - 1)), "StudentT"
    half = q * sd / math.sqrt(n)
    return CiSummary(mean, sd, mean - half, mean + half, n, level, method)


@dataclass
class TrialResult:
    graph_id: int
    seed: int
    algo: str
    objective: Objective
    best_score: float
    best_cuts: int
    wall_time: float
    n_edges: int = 0
    extra: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def cut_percentage(self) -> float:
        return 100.0 * self.best_cuts / self.n_edges if self.n_edges else 0.0

    @property
    def metric(self) -> float:
        """Plotted quantity: cut percentage for max_cut, quotient cost otherwise."""
        return self.cut_percentage if self.objective is Objective.MAX_CUT else self.best_score


# Runners take (g, objective, time_budget, seed, restarts, options) and return
# (partition, stats); stats["loop_time"] is the charged time.
Runner = Callable[[Graph, Objective, "float | None", int, "int | None", dict], "tuple[Partition, dict]"]


def _init_name(g: Graph, objective: Objective, options: dict) -> str:
    name = options.get("init", "auto")
    return default_initializer(g, objective) if name == "auto" else name


def _run_po(g, objective, budget, seed, restarts, options):
    st: dict = {}
    p0 = construct_w(g, objective, derive_seed(seed, 1, 0))
    cfg = PoConfig(
        k_starts=options.get("k_starts", 10),
        stale_iters=options.get("stale_iters", 5),
        # with a budget, keep restarting until it is spent
        stale_restarts=None if budget is not None else options.get("stale_restarts", 5),
        time_budget=budget,
    )
    p = po_optimize(g, p0, objective, cfg, seed=seed, max_restarts=restarts, stats=st)
    st.pop("path_lengths", None)
    return p, st


def _run_fm(g, objective, budget, seed, restarts, options):
    st: dict = {}
    init = _init_name(g, objective, options)
    p0 = get_initializer(init)(g, objective, derive_seed(seed, 1, 0))
    p = fm_optimize(g, p0, objective, time_budget=budget, seed=seed, init=init, max_restarts=restarts, stats=st)
    st["init"] = init
    return p, st


def _run_sa(g, objective, budget, seed, restarts, options):
    st: dict = {}
    init = _init_name(g, objective, options)
    long_run = options.get("long_run", "auto")
    if long_run == "auto":
        long_run = objective is Objective.MAX_CUT and g.coords is None
    cfg = SaConfig(long_run=bool(long_run), **{k: v for k, v in options.get("sa", {}).items()})
    p0 = get_initializer(init)(g, objective, derive_seed(seed, 1, 0))
    runs = None if restarts is None else restarts + 1
    p = sa_run(g, objective, cfg, time_budget=budget, seed=seed, init=init, p0=p0, max_runs=runs, stats=st)
    st["init"] = init
    return p, st


def _run_pg(g, objective, budget, seed, restarts, options):
    st: dict = {}
    profile = options.get("profile")
    if profile is None:
        profile = NgProfile.from_coefficients(DEFAULT_A, DEFAULT_B, g.n)
    runs = None if restarts is None else restarts + 1
    p = pg_run(g, objective, profile, time_budget=budget, seed=seed, max_restarts=runs, stats=st)
    return p, st


def _run_w(g, objective, budget, seed, restarts, options):
    st: dict = {}
    runs = None if restarts is None else restarts + 1
    p = w_run(g, objective, time_budget=budget, seed=seed, max_restarts=runs, stats=st)
    return p, st


ALGORITHMS: dict[str, Runner] = {
    "po": _run_po,
    "kl": _run_fm,
    "fm": _run_fm,
    "sa": _run_sa,
    "pg": _run_pg,
    "w": _run_w,
}


def run_algorithm(
    name: str,
    g: Graph,
    objective: Objective,
    time_budget: float | None = None,
    seed: int = 0,
    restarts: int | None = None,
    options: dict | None = None,
) -> tuple[Partition, dict]:
    try:
        runner = ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; expected one of {sorted(ALGORITHMS)}") from None
    if time_budget is None and restarts is None:
        restarts = 0
    return runner(g, objective, time_budget, seed, restarts, options or {})


def _trial(task) -> TrialResult:
    gi, spec, algo, objective, budget, restarts, seed, options = task
    g = generate(spec)
    try:
        p, st = run_algorithm(algo, g, objective, budget, seed, restarts, options)
    except Exception as e:  # recorded, excluded from aggregation
        return TrialResult(gi, seed, algo, objective, math.nan, -1, 0.0, g.m, {}, f"{type(e).__name__}: {e}")
    extra = {k: v for k, v in st.items() if isinstance(v, (int, float, str))}
    wall = float(st.get("loop_time", 0.0))
    return TrialResult(gi, seed, algo, objective, p.score(objective), p.cut, wall, g.m, extra)


@dataclass
class BenchReport:
    results: list[TrialResult]
    score_ci: dict  # algo -> CiSummary | None
    cut_ci: dict
    objective: Objective
    time_budget: float | None = None
    restarts: int | None = None

    def best_per_graph(self) -> dict:
        """algo -> {graph_id: best TrialResult over trials}."""
        out: dict = {}
        for r in self.results:
            if not r.ok:
                continue
            cur = out.setdefault(r.algo, {}).get(r.graph_id)
            if cur is None or self.objective.better(r.best_score, cur.best_score):
                out[r.algo][r.graph_id] = r
        return out


def _summaries(results: list[TrialResult], objective: Objective, algos: Sequence[str]):
    best: dict = {}
    for r in results:
        if not r.ok:
            continue
        cur = best.setdefault(r.algo, {}).get(r.graph_id)
        if cur is None or objective.better(r.best_score, cur.best_score):
            best[r.algo][r.graph_id] = r
    score_ci, cut_ci = {}, {}
    for a in algos:
        rows = [best[a][k] for k in sorted(best.get(a, {}))]
        if len(rows) < 2:
            warnings.warn(f"{a}: {len(rows)} usable graph(s), no confidence interval")
            score_ci[a] = cut_ci[a] = None
            continue
        score_ci[a] = confidence_interval([r.metric for r in rows])
        cut_ci[a] = confidence_interval([r.best_cuts for r in rows])
    return score_ci, cut_ci


def run_benchmark(
    suite: Sequence[GenSpec],
    algos: Sequence[str],
    objective: Objective,
    per_graph_time: float | None = None,
    trials_per_graph: int = 1,
    seed: int = 0,
    restarts: int | None = None,
    jobs: int = 1,
    options: dict | None = None,
    on_result: Callable[[TrialResult], None] | None = None,
) -> BenchReport:
    """Run every algorithm on every graph of the suite with an equal budget.

    The budget is either ``per_graph_time`` seconds of loop time per trial or
    a fixed ``restarts`` count (deterministic). ``options`` maps an algorithm
    name to its runner options.
    """
    if not algos:
        raise ValueError("no algorithms given")
    for a in algos:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}; expected one of {sorted(ALGORITHMS)}")
    if trials_per_graph < 1:
        raise ValueError("trials_per_graph must be >= 1")
    options = options or {}
    tasks = [
        (gi, spec, a, objective, per_graph_time, restarts, derive_seed(seed, gi, t), options.get(a, {}))
        for gi, spec in enumerate(suite)
        for t in range(trials_per_graph)
        for a in algos
    ]
    results: list[TrialResult] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for r in ex.map(_trial, tasks):
                results.append(r)
                if on_result is not None:
                    on_result(r)
    else:
        for t in tasks:
            r = _trial(t)
            results.append(r)
            if on_result is not None:
                on_result(r)
    for r in results:
        if not r.ok:
            warnings.warn(f"{r.algo} failed on graph {r.graph_id}: {r.error}")
    score_ci, cut_ci = _summaries(results, objective, algos)
    return BenchReport(results, score_ci, cut_ci, objective, per_graph_time, restarts)


def format_csv(results: Sequence[TrialResult], with_time: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER if with_time else CSV_HEADER[:-1])
    for r in results:
        if not r.ok:
            continue
        row = [r.algo, r.graph_id, r.seed, r.objective.value, repr(float(r.best_score)), r.best_cuts]
        if with_time:
            row.append(f"{r.wall_time:.6f}")
        w.writerow(row)
    return buf.getvalue()


def format_intervals(cis: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(INTERVAL_HEADER)
    for algo, ci in cis.items():
        if ci is not None:
            w.writerow([algo, repr(ci.lo), repr(ci.mean), repr(ci.hi)])
    return buf.getvalue()


def parse_intervals(text: str) -> dict:
    """Inverse of ``format_intervals``: algo -> (lo, mean, hi)."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != INTERVAL_HEADER:
        raise ValueError("missing interval header")
    return {r[0]: (float(r[1]), float(r[2]), float(r[3])) for r in rows[1:] if r}


def format_table(report: BenchReport) -> str:
    obj = report.objective
    metric = "cut%" if obj is Objective.MAX_CUT else "quotient"
    budget = f"{report.time_budget}s" if report.time_budget is not None else f"{report.restarts} restarts"
    lines = [
        f"# objective {obj.value}, budget {budget} per trial",
        f"{'algo':<6} {'graphs':>6} {'mean cuts':>11} {'99% CI cuts':>25} {'mean ' + metric:>14} {'mean time':>10}",
    ]
    best = report.best_per_graph()
    for algo in report.cut_ci:
        rows = list(best.get(algo, {}).values())
        if not rows:
            lines.append(f"{algo:<6} {0:>6}   (no successful runs)")
            continue
        ci = report.cut_ci[algo]
        ci_text = f"[{ci.lo:.2f}, {ci.hi:.2f}]" if ci is not None else "n<2"
        lines.append(
            f"{algo:<6} {len(rows):>6} {np.mean([r.best_cuts for r in rows]):>11.2f} {ci_text:>25} "
            f"{np.mean([r.metric for r in rows]):>14.4f} {np.mean([r.wall_time for r in rows]):>9.2f}s"
        )
    return "\n".join(lines) + "\n"


def emit_table(report: BenchReport, out_dir=None) -> dict:
    """Render the human table, per-trial CSV and interval CSVs; write them to ``out_dir`` if given."""
    if not report.results:
        raise ValueError("no results to emit")
    texts = {
        "table.txt": format_table(report),
        "results.csv": format_csv(report.results),
        "intervals.csv": format_intervals(report.score_ci),
        "intervals_cuts.csv": format_intervals(report.cut_ci),
    }
    if out_dir is not None:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for name, text in texts.items():
            (d / name).write_text(text)
    return texts
