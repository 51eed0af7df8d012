"""Experiment harness: seeded multi-run sweeps with CSV reports.

A sweep evaluates each algorithm over a grid of capacities, candidate
location sets, and initial assignments:

* the base geometry and workload come from a generator spec or an instance
  file and stay fixed for the whole sweep;
* each location-set seed redraws the candidate locations uniformly over the
  service area (the grid bounds when present, else the cell bounding box);
* each initial seed restarts the solvers from a fresh random assignment,
  shared by all algorithms at that seed.

Each run yields one report row; aggregates carry mean/min/max per
(algorithm, capacity), the min-max band standing in for the spread of the
individual runs. Run-level parallelism never changes the output: rows are
sorted on a fixed key before aggregation and writing.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .fileio import RunRow, read_instance, write_report
from .generate import GenSpec, generate
from .model import Instance, server_load
from .pipeline import ALGORITHMS, SolverConfig, solve

DEFAULT_CAPACITIES = (0.03, 0.04, 0.05, 0.06, 0.07, 0.08)

SUMMARY_COLUMNS = (
    "algo",
    "capacity",
    "cost_mean",
    "cost_min",
    "cost_max",
    "spread_mean",
    "spread_min",
    "spread_max",
    "load_ratio_mean",
)


@dataclass(frozen=True)
class SweepSpec:
    """One experiment: instance source plus the replication protocol."""

    source: GenSpec | str  # generator spec, or path to an instance file
    capacities: tuple[float, ...] = DEFAULT_CAPACITIES
    n_location_sets: int = 10
    n_initials: int = 5
    algorithms: tuple[str, ...] = ALGORITHMS
    master_seed: int = 0
    kappa: float = 1e-4
    epsilon: float = math.inf

    def __post_init__(self):
        for c in self.capacities:
            if not 0.0 < c < 1.0:
                raise ValueError("capacities must lie in (0, 1)")
        if self.n_location_sets < 1 or self.n_initials < 1:
            raise ValueError("seed counts must be >= 1")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")


@dataclass(frozen=True)
class AggregateRow:
    algo: str
    capacity: float
    cost_mean: float
    cost_min: float
    cost_max: float
    spread_mean: float
    spread_min: float
    spread_max: float
    load_ratio_mean: float


@dataclass
class ExperimentReport:
    rows: list[RunRow]
    aggregates: list[AggregateRow]


def base_instance(spec: SweepSpec) -> Instance:
    if isinstance(spec.source, GenSpec):
        return generate(spec.source)
    return read_instance(spec.source)


def _service_bounds(instance: Instance) -> tuple[float, float, float, float]:
    if instance.grid is not None:
        return instance.grid.bounds()
    xy = instance.cell_coords
    return (
        float(xy[:, 0].min()),
        float(xy[:, 1].min()),
        float(xy[:, 0].max()),
        float(xy[:, 1].max()),
    )


def candidate_variant(instance: Instance, master_seed: int, loc_seed: int) -> Instance:
    """Base instance with candidate locations redrawn for one location-set seed."""
    rng = np.random.default_rng(np.random.SeedSequence([master_seed, 1, loc_seed]))
    x0, y0, x1, y1 = _service_bounds(instance)
    pts = rng.random((instance.n_candidates, 2))
    cands = np.column_stack([x0 + pts[:, 0] * (x1 - x0), y0 + pts[:, 1] * (y1 - y0)])
    return Instance(
        instance.cell_coords,
        cands,
        instance.workload,
        instance.n_servers,
        instance.capacity,
        grid=instance.grid,
    )


def run_seed(master_seed: int, loc_seed: int, init_seed: int) -> int:
    """64-bit solver seed for one (location set, initial) pair."""
    words = np.random.SeedSequence([master_seed, 2, loc_seed, init_seed]).generate_state(2)
    return int(words[0]) << 32 | int(words[1])


def _nonempty_load_range(instance: Instance, assignment) -> tuple[float, float]:
    loads = [
        server_load(instance, assignment, l)
        for l in assignment.server_locations
        if assignment.cells_of(l).size
    ]
    return (max(loads), min(loads))


def _run_chunk(args) -> list[RunRow]:
    spec, instance, loc_seed, capacity = args
    variant = replace(candidate_variant(instance, spec.master_seed, loc_seed), capacity=capacity)
    rows = []
    for init_seed in range(spec.n_initials):
        seed = run_seed(spec.master_seed, loc_seed, init_seed)
        for algo in spec.algorithms:
            config = SolverConfig(algo, seed=seed, kappa=spec.kappa, epsilon=spec.epsilon)
            t0 = time.perf_counter()
            result = solve(variant, config)
            wall_ms = (time.perf_counter() - t0) * 1000.0
            max_load, min_load = _nonempty_load_range(variant, result.assignment)
            rows.append(
                RunRow(
                    algo=algo,
                    capacity=capacity,
                    loc_seed=loc_seed,
                    init_seed=init_seed,
                    cost=result.objectives.cost,
                    spread=result.objectives.spread,
                    max_load=max_load,
                    min_load=min_load,
                    wall_ms=wall_ms,
                )
            )
    return rows


def aggregate_rows(rows: list[RunRow]) -> list[AggregateRow]:
    """Mean/min/max per (algorithm, capacity), rows in sorted key order."""
    groups: dict[tuple[str, float], list[RunRow]] = {}
    for r in rows:
        groups.setdefault((r.algo, r.capacity), []).append(r)
    out = []
    for (algo, capacity) in sorted(groups):
        g = groups[(algo, capacity)]
        costs = [r.cost for r in g]
        spreads = [r.spread for r in g]
        ratios = [r.max_load / r.min_load for r in g if r.min_load > 0]
        out.append(
            AggregateRow(
                algo=algo,
                capacity=capacity,
                cost_mean=float(np.mean(costs)),
                cost_min=min(costs),
                cost_max=max(costs),
                spread_mean=float(np.mean(spreads)),
                spread_min=min(spreads),
                spread_max=max(spreads),
                load_ratio_mean=float(np.mean(ratios)) if ratios else math.nan,
            )
        )
    return out


def write_summary(aggregates: list[AggregateRow], path) -> None:
    lines = [",".join(SUMMARY_COLUMNS)]
    for a in aggregates:
        lines.append(
            ",".join(
                [
                    a.algo,
                    repr(float(a.capacity)),
                    repr(a.cost_mean),
                    repr(a.cost_min),
                    repr(a.cost_max),
                    repr(a.spread_mean),
                    repr(a.spread_min),
                    repr(a.spread_max),
                    repr(a.load_ratio_mean),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def run_sweep(spec: SweepSpec, out_dir=None, jobs: int = 1) -> ExperimentReport:
    """Run the full protocol; optionally write ``runs.csv`` and ``summary.csv``."""
    instance = base_instance(spec)
    chunks = [
        (spec, instance, loc_seed, capacity)
        for loc_seed in range(spec.n_location_sets)
        for capacity in spec.capacities
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_chunk, chunks))
    else:
        results = [_run_chunk(c) for c in chunks]
    rows = [row for chunk in results for row in chunk]
    rows.sort(key=lambda r: (r.algo, r.capacity, r.loc_seed, r.init_seed))
    aggregates = aggregate_rows(rows)
    if out_dir is not None:
        out_dir = Path(out_dir)
        os.makedirs(out_dir, exist_ok=True)
        write_report(rows, out_dir / "runs.csv")
        write_summary(aggregates, out_dir / "summary.csv")
    return ExperimentReport(rows=rows, aggregates=aggregates)
