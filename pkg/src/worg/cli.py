"""Command-line front end.

    worg run SCENARIO [--out-dir DIR] [--seed N] [--method M] [--dump-dtw]
    worg compare SCENARIO SCENARIO... [--out-dir DIR] [--seed N] [--method M]
    worg dump-dtw DEMAND PRODUCTION [--out-dir DIR]

Exit codes: 0 success, 2 validation failure, 3 runtime abort.

All numbers are written with 6 significant digits (``%.6g``). Files written
by ``run``, in fixed column order:

    schedule.csv      year, theta
    curves.csv        year, demand_gwe, production_best_gwe, production_second_gwe
    convergence.csv   s, method, distance_gwe, model_distance_gwe, best_so_far_gwe
    summary.csv       key, value
    cost_matrix.csv   (--dump-dtw) row a, columns b of the DTW cost matrix
    warp_path.csv     (--dump-dtw) i, a, b

Wall time goes to stdout only, so repeated runs produce identical files.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import dtw
from .driver import SimulationAborted, WorgResult, optimize
from .scenario import Scenario, ScenarioError, load_scenario
from .simulator import make_runner

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ABORT = 3

logger = logging.getLogger("worg")


def fmt(x) -> str:
    if x is None or (isinstance(x, float) and np.isnan(x)):
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.6g" % x


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])


def run_scenario(scenario: Scenario) -> WorgResult:
    grid = scenario.grid
    runner = make_runner(scenario.fleet(), grid)

    def progress(rec):
        method = rec.method.value if rec.method else "bound"
        logger.info("s=%d %-10s d=%.6g", rec.s, method, rec.dist)

    return optimize(scenario.demand(), scenario.bounds(), runner, scenario.options(), progress)


def write_run_outputs(scenario: Scenario, result: WorgResult, out_dir: Path, dump_dtw=False):
    out_dir.mkdir(parents=True, exist_ok=True)
    years = scenario.grid.years
    demand = scenario.demand().values
    best = result.best
    second = result.second_best

    write_csv(out_dir / "schedule.csv", ["year", "theta"], zip(years, best.schedule))
    second_curve = second.production if second is not None else [None] * len(years)
    write_csv(
        out_dir / "curves.csv",
        ["year", "demand_gwe", "production_best_gwe", "production_second_gwe"],
        zip(years, demand, best.production, second_curve),
    )
    write_csv(
        out_dir / "convergence.csv",
        ["s", "method", "distance_gwe", "model_distance_gwe", "best_so_far_gwe"],
        (
            (r.s, r.method.value if r.method else "bound", r.dist, r.model_distance, b)
            for r, b in zip(result.trace, result.best_so_far())
        ),
    )
    opts = scenario.options()
    write_csv(
        out_dir / "summary.csv",
        ["key", "value"],
        [
            ("scenario", scenario.name),
            ("method", opts.method.value),
            ("kernel", opts.kernel.value),
            ("seed", opts.seed),
            ("max_sims", opts.max_sims),
            ("max_d_gwe", opts.threshold(scenario.demand())),
            ("n_sims", result.n_sims),
            ("best_s", best.s),
            ("best_dist_gwe", best.dist),
            ("converged", "yes" if best.dist <= opts.threshold(scenario.demand()) else "no"),
        ],
    )
    if dump_dtw:
        write_dtw(demand, best.production, out_dir)


def write_dtw(f, g, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    C = dtw.cost_matrix(dtw.abs_difference_matrix(f, g))
    write_csv(
        out_dir / "cost_matrix.csv",
        ["a"] + [f"b{b}" for b in range(C.shape[1])],
        ([a] + list(row) for a, row in enumerate(C)),
    )
    write_csv(out_dir / "warp_path.csv", ["i", "a", "b"], ((i, a, b) for i, (a, b) in enumerate(dtw.warp_path(C))))
    return float(C[-1, -1] / sum(C.shape))


def read_series(text: str) -> np.ndarray:
    """A comma-separated list of numbers, or a path to a file with one value per line.

    A non-numeric first line in the file is treated as a header; for
    multi-column CSV the last column is used.
    """
    path = Path(text)
    if path.is_file():
        values = []
        for i, line in enumerate(path.read_text().splitlines()):
            line = line.strip()
            if not line:
                continue
            cell = line.split(",")[-1]
            try:
                values.append(float(cell))
            except ValueError:
                if i == 0:
                    continue
                raise ScenarioError(f"{path}:{i + 1}: not a number: {cell!r}") from None
    else:
        try:
            values = [float(v) for v in text.split(",") if v.strip()]
        except ValueError:
            raise ScenarioError(f"{text!r} is neither a file nor a list of numbers") from None
    if not values:
        raise ScenarioError(f"{text!r} holds no values")
    return np.array(values)


def cmd_run(args) -> int:
    scenario = load_scenario(args.scenario).with_overrides(seed=args.seed, method=args.method).validate()
    t0 = time.perf_counter()
    result = run_scenario(scenario)
    wall = time.perf_counter() - t0
    out_dir = Path(args.out_dir)
    write_run_outputs(scenario, result, out_dir, dump_dtw=args.dump_dtw)
    print(
        f"{scenario.name}: best_dist={result.best_dist:.6g} GWe after {result.n_sims} simulations "
        f"(best at s={result.best.s}); wall time {wall:.2f} s; outputs in {out_dir}"
    )
    return EXIT_OK


def cmd_compare(args) -> int:
    if len(args.scenarios) < 2:
        raise ScenarioError("compare needs at least two scenarios")
    scenarios = [
        load_scenario(p).with_overrides(seed=args.seed, method=args.method).validate()
        for p in args.scenarios
    ]
    ref = scenarios[0]
    for sc in scenarios[1:]:
        if sc.grid != ref.grid:
            raise ScenarioError(f"{sc.name}: time grid {sc.grid} differs from {ref.name}'s {ref.grid}")
        if not np.array_equal(sc.demand().values, ref.demand().values):
            raise ScenarioError(f"{sc.name}: demand curve differs from {ref.name}'s")

    labels, columns = [], []
    for sc in scenarios:
        label = f"{sc.name}:{sc.options().method.value}"
        n = sum(1 for lab in labels if lab == label or lab.startswith(label + "#"))
        labels.append(label if n == 0 else f"{label}#{n + 1}")
        t0 = time.perf_counter()
        result = run_scenario(sc)
        print(f"{labels[-1]}: best_dist={result.best_dist:.6g} GWe, {result.n_sims} sims, "
              f"{time.perf_counter() - t0:.2f} s")
        columns.append([r.dist for r in result.trace])

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    depth = max(len(c) for c in columns)
    rows = [[s] + [c[s] if s < len(c) else None for c in columns] for s in range(depth)]
    write_csv(out_dir / "compare.csv", ["s"] + labels, rows)
    print(f"convergence table written to {out_dir / 'compare.csv'}")
    return EXIT_OK


def cmd_dump_dtw(args) -> int:
    f = read_series(args.demand)
    g = read_series(args.production)
    d = write_dtw(f, g, Path(args.out_dir))
    print(f"dtw distance {d:.6g}; cost matrix and warp path written to {args.out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="worg", description="Deployment schedule optimizer")
    parser.add_argument("-v", "--verbose", action="store_true", help="log every simulation")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out-dir", default="worg-out", help="directory for output files")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--method", choices=["stochastic", "inner-prod", "all"], help="override the estimation method")

    p = sub.add_parser("run", help="optimize one scenario")
    p.add_argument("scenario")
    common(p)
    p.add_argument("--dump-dtw", action="store_true", help="also write the best curve's DTW cost matrix and warp path")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="run several scenarios and tabulate convergence side by side")
    p.add_argument("scenarios", nargs="+")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("dump-dtw", help="write DTW cost matrix and warp path for two curves")
    p.add_argument("demand", help="file or comma-separated values")
    p.add_argument("production", help="file or comma-separated values")
    p.add_argument("--out-dir", default="worg-out")
    p.set_defaults(func=cmd_dump_dtw)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SimulationAborted as exc:
        print(f"aborted after {len(exc.trace)} simulations: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except (ValueError, RuntimeError) as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
