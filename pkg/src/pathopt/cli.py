"""Command-line front end: ``pathopt {gen,init,run,bench,nganalyze,postprocess}``.

Every command prints a reproduction line (``# repro: ...``) first. Exit
codes: 0 success, 1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import shlex
import sys
from pathlib import Path

from .bench import ALGORITHMS, emit_table, run_algorithm, run_benchmark
from .generators import KINDS, GenSpec, generate, geometric_threshold
from .graph import Objective
from .initial import INITIALIZERS, get_initializer
from .io import FormatError, read_graph, read_partition, read_profile, read_suite, write_graph, write_partition, write_profile
from .neargreedy import Ordering, collect_ensemble, early_share, replay_label
from .rng import fresh_seed


class UsageError(Exception):
    pass


def _objective(text: str) -> Objective:
    try:
        return Objective.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _ordering(text: str) -> Ordering:
    names = {"random": Ordering.RANDOM, "maxdiff": Ordering.MAX_DIFF_MAX_DEGREE}
    if text not in names:
        raise argparse.ArgumentTypeError(f"ordering must be one of {sorted(names)}")
    return names[text]


def _add_genspec_flags(sp) -> None:
    sp.add_argument("--kind", required=True, choices=KINDS)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float)
    sp.add_argument("--d", type=float, help="geometric distance threshold")
    sp.add_argument("--avg-degree", type=float, help="geometric: derive d from the expected average degree")
    sp.add_argument("--r", type=int)
    sp.add_argument("--p1", type=float)
    sp.add_argument("--p2", type=float)
    sp.add_argument("--k1", type=int)
    sp.add_argument("--k2", type=int)


def _genspec(args) -> GenSpec:
    d = args.d
    if args.avg_degree is not None:
        if args.kind != "geometric" or d is not None:
            raise UsageError("--avg-degree applies to --kind geometric without --d")
        d = geometric_threshold(args.n, args.avg_degree)
    params = dict(p=args.p, d=d, r=args.r, p1=args.p1, p2=args.p2, k1=args.k1, k2=args.k2)
    try:
        return GenSpec(args.kind, args.n, args.seed, **{k: v for k, v in params.items() if v is not None})
    except (ValueError, TypeError) as e:
        raise UsageError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pathopt", description="Graph partitioning heuristics and benchmarks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, objective=True):
        sp.add_argument("--seed", type=int, help="random seed (drawn from entropy and printed if omitted)")
        if objective:
            sp.add_argument("--objective", type=_objective, default=Objective.MAX_CUT, help="maxcut or quotient")

    sp = sub.add_parser("gen", help="generate a graph")
    _add_genspec_flags(sp)
    common(sp, objective=False)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("init", help="build an initial partitioning")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--method", choices=sorted(INITIALIZERS), default="random")
    common(sp)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("run", help="run one heuristic on a graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--algo", choices=sorted(ALGORITHMS), required=True)
    sp.add_argument("--time", type=float, help="loop-time budget in seconds")
    sp.add_argument("--restarts", type=int, help="fixed restart count instead of a time budget")
    sp.add_argument("--init", default="auto", help="initializer for kl/fm/sa (auto, random, line, w)")
    sp.add_argument("--profile", help="ng-profile file for --algo pg")
    sp.add_argument("--k-starts", type=int, default=10, help="po: best-gain start vertices per iteration")
    sp.add_argument("--stale-iters", type=int, default=5, help="po: stale iterations before a restart")
    sp.add_argument("--long-run", choices=("auto", "yes", "no"), default="auto", help="sa: one stretched anneal")
    sp.add_argument("--alpha", type=float, help="sa: quotient-cut imbalance penalty weight")
    sp.add_argument("--cooling", type=float, help="sa: cooling ratio per stage")
    common(sp)
    sp.add_argument("--out", help="write the best partitioning here")

    sp = sub.add_parser("bench", help="benchmark heuristics over a suite")
    sp.add_argument("--suite", required=True, help="one '# genspec ...' line per graph")
    sp.add_argument("--algos", required=True, help="comma-separated, e.g. po,kl,sa,pg")
    sp.add_argument("--time", type=float)
    sp.add_argument("--restarts", type=int)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--jobs", type=int, default=1)
    common(sp)
    sp.add_argument("--out", required=True, help="output directory")

    sp = sub.add_parser("nganalyze", help="estimate the ng-function over a graph ensemble")
    _add_genspec_flags(sp)
    sp.add_argument("--oracle", choices=("fm", "kl", "po", "sa"), default="fm")
    sp.add_argument("--ensemble", type=int, default=1000)
    sp.add_argument("--oracle-restarts", type=int, default=4)
    sp.add_argument("--ordering", type=_ordering, default=Ordering.MAX_DIFF_MAX_DEGREE, help="random or maxdiff")
    sp.add_argument("--jobs", type=int, default=1)
    common(sp)
    sp.add_argument("--out", required=True, help="CSV: index,raw,percentile,fitted")
    sp.add_argument("--profile-out", help="also write the profile file used by 'run --algo pg'")

    sp = sub.add_parser("postprocess", help="label the placements of a partitioning greedy/non-greedy")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--partition", required=True)
    sp.add_argument("--ordering", type=_ordering, default=Ordering.MAX_DIFF_MAX_DEGREE)
    common(sp)
    sp.add_argument("--out", help="CSV: index,vertex,label")
    return ap


def _repro(argv: list[str], seed: int) -> str:
    args = list(argv)
    if "--seed" not in args and not any(a.startswith("--seed=") for a in args):
        args += ["--seed", str(seed)]
    return "# repro: pathopt " + shlex.join(args)


def _require_file(path: str, what: str) -> None:
    if not Path(path).is_file():
        raise UsageError(f"{what} file not found: {path}")


def _budget(args) -> tuple:
    if args.time is not None and args.time < 0:
        raise UsageError("--time must be non-negative")
    if args.restarts is not None and args.restarts < 0:
        raise UsageError("--restarts must be non-negative")
    return args.time, args.restarts


def cmd_gen(args) -> None:
    spec = _genspec(args)
    g = generate(spec)
    write_graph(g, args.out)
    print(f"# wrote graph n={g.n} m={g.m} to {args.out}")


def cmd_init(args) -> None:
    g = read_graph(args.graph)
    p = get_initializer(args.method)(g, args.objective, args.seed)
    write_partition(p, args.out, [f"# method {args.method} cut {p.cut}"])
    print(f"cut {p.cut} score {p.score(args.objective)!r} sizes {p.size_left} {p.size_right}")


def cmd_run(args) -> None:
    budget, restarts = _budget(args)
    if args.k_starts < 1 or args.stale_iters < 1:
        raise UsageError("--k-starts and --stale-iters must be >= 1")
    sa: dict = {}
    if args.alpha is not None:
        sa["balance_alpha"] = args.alpha
    if args.cooling is not None:
        if not 0.0 < args.cooling < 1.0:
            raise UsageError("--cooling must lie in (0, 1)")
        sa["cooling_ratio"] = args.cooling
    long_run = {"auto": "auto", "yes": True, "no": False}[args.long_run]
    options: dict = {
        "init": args.init,
        "k_starts": args.k_starts,
        "stale_iters": args.stale_iters,
        "long_run": long_run,
        "sa": sa,
    }
    if args.profile:
        if args.algo != "pg":
            raise UsageError("--profile applies to --algo pg only")
        _require_file(args.profile, "profile")
        options["profile"] = read_profile(args.profile)
    g = read_graph(args.graph)
    p, st = run_algorithm(args.algo, g, args.objective, budget, args.seed, restarts, options)
    print(f"cut {p.cut} score {p.score(args.objective)!r} sizes {p.size_left} {p.size_right}")
    print("# stats " + " ".join(f"{k}={v}" for k, v in st.items() if isinstance(v, (int, float, str))))
    if args.out:
        write_partition(p, args.out, [f"# algo {args.algo} cut {p.cut}"])


def cmd_bench(args) -> None:
    budget, restarts = _budget(args)
    if budget is None and restarts is None:
        raise UsageError("bench needs --time or --restarts")
    algos = [a for a in args.algos.split(",") if a]
    unknown = [a for a in algos if a not in ALGORITHMS]
    if not algos or unknown:
        raise UsageError(f"unknown or empty --algos {args.algos!r}; choose from {sorted(ALGORITHMS)}")
    if args.jobs < 1 or args.trials < 1:
        raise UsageError("--jobs and --trials must be >= 1")
    suite = read_suite(args.suite)

    def progress(r):
        status = f"cuts {r.best_cuts}" if r.ok else f"FAILED {r.error}"
        print(f"# graph {r.graph_id} {r.algo}: {status}", flush=True)

    report = run_benchmark(
        suite, algos, args.objective, budget, args.trials, args.seed, restarts, args.jobs, on_result=progress
    )
    texts = emit_table(report, args.out)
    print(texts["table.txt"], end="")


def cmd_nganalyze(args) -> None:
    if args.ensemble < 1 or args.jobs < 1:
        raise UsageError("--ensemble and --jobs must be >= 1")
    spec = _genspec(args)
    ens = collect_ensemble(
        spec, args.objective, args.oracle, args.ensemble, args.seed, (args.ordering,), args.oracle_restarts, args.jobs
    )
    prof = ens.profile(args.ordering)
    n = prof.n
    with open(args.out, "w", newline="") as f:
        f.write("# format v1\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["index", "raw", "percentile", "fitted"])
        for i in range(1, n + 1):
            pct = min((i - 1) * 100 // n, 99)
            w.writerow([i, repr(float(prof.raw[i - 1])), pct, repr(prof.fitted(i))])
    if args.profile_out:
        write_profile(prof, args.profile_out)
    print(
        f"a {prof.a:.4f} b {prof.b:.4f} r2 {prof.r_squared:.4f} stderr {prof.stderr:.4f} "
        f"nongreedy {prof.nongreedy_fraction:.4f} early_share {early_share(ens.labels[args.ordering]):.4f}"
    )


def cmd_postprocess(args) -> None:
    g = read_graph(args.graph)
    target = read_partition(args.partition, g)
    tr = replay_label(g, target, args.ordering, args.objective, args.seed)
    if args.out:
        with open(args.out, "w", newline="") as f:
            f.write("# format v1\n")
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["index", "vertex", "label"])
            for i, (v, lab) in enumerate(zip(tr.order, tr.labels), 1):
                w.writerow([i, v, "nongreedy" if lab else "greedy"])
    print(f"nongreedy_fraction {tr.nongreedy_fraction:.4f} placements {len(tr.order)}")


COMMANDS = {
    "gen": cmd_gen,
    "init": cmd_init,
    "run": cmd_run,
    "bench": cmd_bench,
    "nganalyze": cmd_nganalyze,
    "postprocess": cmd_postprocess,
}

_INPUTS = {"graph": "graph", "partition": "partition", "suite": "suite"}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.seed is None:
        args.seed = fresh_seed()
    print(_repro(argv, args.seed), flush=True)
    try:
        for attr, what in _INPUTS.items():
            path = getattr(args, attr, None)
            if path is not None:
                _require_file(path, what)
        COMMANDS[args.command](args)
    except UsageError as e:
        print(f"pathopt {args.command}: error: {e}", file=sys.stderr)
        return 2
    except (FormatError, ValueError, OSError) as e:
        print(f"pathopt {args.command}: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
