"""End-to-end solvers.

Four algorithms share one seeded initial assignment:

* ``RAND``          -- the random initial assignment itself.
* ``KMED``          -- spread-only location swap search.
* ``FM_HUNG``       -- cost refinement from the random initial, then one
                       server relocation pass.
* ``KMED_FM_HUNG``  -- the three-phase method: swap search, then cost
                       refinement capped at ``(1 + epsilon)`` times the
                       phase-one spread, then relocation.

The master seed is split into two named sub-streams (location subset, cell
map), so every algorithm run with the same seed starts from the same initial
assignment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fm import cost_descent
from .hungarian import relocate
from .kmedian import SwapParams, kmedian_search
from .model import Assignment, Instance, Objectives, objectives, spread, validate
from .oracle import OracleBudgetError  # re-exported convenience for CLI users

ALGORITHMS = ("RAND", "KMED", "FM_HUNG", "KMED_FM_HUNG")


@dataclass(frozen=True)
class SolverConfig:
    algorithm: str
    seed: int
    kappa: float = 1e-4
    epsilon: float = math.inf  # allowed relative spread growth during cost refinement
    max_kmedian_sweeps: int | None = None
    max_descent_sweeps: int = 100

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if not 0.0 < self.kappa < 1.0:
            raise ValueError("kappa must lie in (0, 1)")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0 (math.inf allowed)")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass
class PhaseRecord:
    """Objectives after one phase; ``events`` holds the phase's own log
    (accepted-swap spreads, or (cost, spread) per committed refinement)."""

    name: str
    cost: float
    spread: float
    events: list = field(default_factory=list)


@dataclass
class SolveResult:
    assignment: Assignment
    objectives: Objectives
    trace: list[PhaseRecord]


def random_assignment(instance: Instance, seed: int) -> Assignment:
    """Seeded random initial: a uniform location subset plus a uniform cell map.

    Stream order: sub-stream 0 draws the location subset, sub-stream 1 the
    cell map over the (sorted) subset.
    """
    loc_ss, map_ss = np.random.SeedSequence(seed).spawn(2)
    loc_rng = np.random.default_rng(loc_ss)
    map_rng = np.random.default_rng(map_ss)
    locs = np.sort(loc_rng.choice(instance.n_candidates, size=instance.n_servers, replace=False))
    cmap = locs[map_rng.integers(0, instance.n_servers, size=instance.n_cells)]
    return Assignment(tuple(int(l) for l in locs), cmap)


def solve(instance: Instance, config: SolverConfig) -> SolveResult:
    """Run one algorithm and record objectives after every phase."""
    current = random_assignment(instance, config.seed)
    trace = [_record("initial", instance, current)]

    if config.algorithm in ("KMED", "KMED_FM_HUNG"):
        swap_log: list = []
        current = kmedian_search(
            instance,
            current,
            SwapParams(kappa=config.kappa, max_sweeps=config.max_kmedian_sweeps),
            accepted_log=swap_log,
        )
        trace.append(_record("kmedian", instance, current, swap_log))

    if config.algorithm in ("FM_HUNG", "KMED_FM_HUNG"):
        baseline = spread(instance, current)
        cap = math.inf if math.isinf(config.epsilon) else (1.0 + config.epsilon) * baseline
        commit_log: list = []
        current = cost_descent(
            instance,
            current,
            spread_cap=cap,
            max_sweeps=config.max_descent_sweeps,
            commit_log=commit_log,
        )
        trace.append(_record("refine", instance, current, commit_log))
        current = relocate(instance, current)
        trace.append(_record("relocate", instance, current))

    report = validate(instance, current)
    if report is not None:  # defensive; phases preserve validity
        raise RuntimeError(f"solver produced invalid assignment: {report}")
    return SolveResult(current, objectives(instance, current), trace)


def _record(name: str, instance: Instance, assignment: Assignment, events: list | None = None) -> PhaseRecord:
    obj = objectives(instance, assignment)
    return PhaseRecord(name, obj.cost, obj.spread, events if events is not None else [])
