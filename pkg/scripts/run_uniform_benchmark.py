#!/usr/bin/env python3
"""Full geography-free benchmark: 500 cells, 50 candidate sites, 10 servers.

Sweeps all four algorithms over capacities 0.03..0.08 with 10 candidate-set
draws x 5 initial assignments per point, then emits the run CSV, the
aggregate summary, objective-vs-capacity curves, and one example assignment
map per algorithm.

Warning: the default protocol is 1200 solver runs; expect roughly an hour on
one core. Trim --loc-sets/--initials or --capacities for a quick look.
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from edgeplace.generate import GenSpec
from edgeplace.harness import SweepSpec, base_instance, candidate_variant, run_seed, run_sweep
from edgeplace.pipeline import SolverConfig, solve
from edgeplace.render import plot_curves, render_map


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cells", type=int, default=500)
    ap.add_argument("--candidates", type=int, default=50)
    ap.add_argument("--servers", type=int, default=10)
    ap.add_argument("--capacities", default="0.03,0.04,0.05,0.06,0.07,0.08")
    ap.add_argument("--loc-sets", type=int, default=10)
    ap.add_argument("--initials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out-dir", default="out/uniform")
    args = ap.parse_args()

    spec = SweepSpec(
        source=GenSpec(
            n_cells=args.cells,
            n_candidates=args.candidates,
            n_servers=args.servers,
            capacity=0.05,
            seed=args.seed,
        ),
        capacities=tuple(float(c) for c in args.capacities.split(",")),
        n_location_sets=args.loc_sets,
        n_initials=args.initials,
        master_seed=args.seed,
    )
    out_dir = Path(args.out_dir)
    report = run_sweep(spec, out_dir=out_dir, jobs=args.jobs)
    plot_curves(report.aggregates, out_dir)

    # one rendered map per algorithm at the middle capacity
    inst = candidate_variant(base_instance(spec), spec.master_seed, 0)
    import dataclasses

    inst = dataclasses.replace(inst, capacity=spec.capacities[len(spec.capacities) // 2])
    for algo in spec.algorithms:
        result = solve(inst, SolverConfig(algo, seed=run_seed(spec.master_seed, 0, 0)))
        render_map(inst, result.assignment, out_dir / f"map_{algo}.svg")
    print(f"wrote {out_dir}/runs.csv, summary.csv, curves and maps")
    return 0


if __name__ == "__main__":
    sys.exit(main())
