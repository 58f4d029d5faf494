"""Best-so-far distance per simulation for every estimator and growth rate.

    python3 scripts/convergence_study.py --out-dir study [--seed 424242] [--max-sims 20]

Writes ``convergence.csv`` (one column per method and rate) and ``summary.csv``
(final distances as a fraction of mean demand). Takes a couple of minutes.
"""

import argparse
import time
from pathlib import Path

from worg.cli import write_csv
from worg.demand import DeploymentBounds, TimeGrid, growth_demand, growth_upper_bound, zero_lower_bound
from worg.driver import DEFAULT_SEED, WorgOptions, optimize
from worg.estimate import EstimationMethod
from worg.simulator import FleetConfig, make_runner


def run_one(rho, method, seed, max_sims):
    grid = TimeGrid(2016, 20)
    demand = growth_demand(rho, 90.0, grid)
    bounds = DeploymentBounds(zero_lower_bound(grid), growth_upper_bound(rho, 10, grid))
    opts = WorgOptions(method=method, max_sims=max_sims, seed=seed)
    return optimize(demand, bounds, make_runner(FleetConfig(), grid), opts), demand


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="study")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--max-sims", type=int, default=20)
    ap.add_argument("--rates", type=float, nargs="+", default=[0.0, 0.01, 0.02])
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    labels, columns, summary = [], [], []
    for rho in args.rates:
        for method in EstimationMethod:
            t0 = time.perf_counter()
            result, demand = run_one(rho, method, args.seed, args.max_sims)
            wall = time.perf_counter() - t0
            label = f"{method.value}@{rho:g}"
            labels.append(label)
            columns.append(result.best_so_far())
            summary.append((rho, method.value, result.n_sims, result.best.s, result.best_dist,
                            result.best_dist / demand.mean, min(result.best_so_far()[:10]) / demand.mean))
            print(f"{label:>16}: best {result.best_dist:.4g} GWe at s={result.best.s} ({wall:.1f} s)")

    depth = max(len(c) for c in columns)
    rows = [[s] + [c[s] if s < len(c) else None for c in columns] for s in range(depth)]
    write_csv(out / "convergence.csv", ["s"] + labels, rows)
    write_csv(out / "summary.csv",
              ["rho", "method", "n_sims", "best_s", "best_dist_gwe", "best_frac", "best_frac_by_s10"], summary)
    print(f"wrote {out / 'convergence.csv'} and {out / 'summary.csv'}")


if __name__ == "__main__":
    main()
