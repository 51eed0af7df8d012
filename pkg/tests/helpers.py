"""Independent brute-force reference implementations used as test oracles.

Everything here is written as plainly as possible (explicit Python loops, no
shared code with the package beyond the data types) so that agreement with
the library is meaningful.
"""
from __future__ import annotations

import itertools

import numpy as np

from edgeplace.model import Assignment, Instance


def random_instance(rng, n_cells, n_candidates, n_servers, capacity=0.5, grid=None):
    """Valid random instance with uniform coordinates and normalized workload."""
    cells = rng.random((n_cells, 2))
    cands = rng.random((n_candidates, 2))
    raw = rng.random((n_cells, n_cells))
    w = np.triu(raw)
    w = w + np.triu(w, 1).T
    w /= np.triu(w).sum()
    return Instance(cells, cands, w, n_servers, capacity, grid=grid)


def random_assignment(rng, instance):
    """Uniform random location subset and cell map (test-local, no stream contract)."""
    locs = sorted(int(l) for l in rng.choice(instance.n_candidates, size=instance.n_servers, replace=False))
    cmap = rng.choice(locs, size=instance.n_cells)
    return Assignment(tuple(locs), cmap)


def loop_server_load(instance, assignment, location):
    """Triple-loop reference for one server's load."""
    total = 0.0
    w = instance.workload
    for i in range(instance.n_cells):
        if assignment.cell_to_location[i] != location:
            continue
        for j in range(i, instance.n_cells):
            if assignment.cell_to_location[j] == location:
                total += w[i, j]
    return total


def loop_cost(instance, assignment):
    """Pair-by-pair reference for the backhaul cost."""
    w = instance.workload
    cmap = assignment.cell_to_location
    cross = 0.0
    for i in range(instance.n_cells):
        for j in range(i, instance.n_cells):
            if cmap[i] != cmap[j]:
                cross += w[i, j]
    overload = 0.0
    for l in assignment.server_locations:
        overload += max(0.0, loop_server_load(instance, assignment, l) - instance.capacity)
    return cross + overload


def loop_spread(instance, assignment):
    """Double-loop reference for the spread objective."""
    total = 0.0
    for i in range(instance.n_cells):
        w_i = sum(instance.workload[i, j] for j in range(instance.n_cells))
        total += instance.fronthaul[i, assignment.cell_to_location[i]] * w_i
    return total


def loop_delta_cost(workload, cells_a, cells_b, capacity):
    """Reference for the two-server cost contribution: cut weight plus overloads."""
    cross = 0.0
    for i in cells_a:
        for j in cells_b:
            cross += workload[i, j]
    load_a = sum(workload[i, j] for i in cells_a for j in cells_a if i <= j)
    load_b = sum(workload[i, j] for i in cells_b for j in cells_b if i <= j)
    return cross + max(0.0, load_a - capacity) + max(0.0, load_b - capacity)


def all_assignments(instance):
    """Yield every feasible assignment of a tiny instance."""
    for subset in itertools.combinations(range(instance.n_candidates), instance.n_servers):
        for cmap in itertools.product(subset, repeat=instance.n_cells):
            yield Assignment(subset, np.array(cmap))


def brute_force_matching(entries):
    """Minimum-total injective row->column map by trying every permutation.

    Returns (best_total, best_columns) with ties broken toward the
    lexicographically smallest column tuple.
    """
    m, n = entries.shape
    best_total = None
    best_cols = None
    for cols in itertools.permutations(range(n), m):
        total = 0.0
        for r in range(m):
            total += entries[r, cols[r]]
        if best_total is None or total < best_total:
            best_total = total
            best_cols = cols
    return best_total, best_cols
