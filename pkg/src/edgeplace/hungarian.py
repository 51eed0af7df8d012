"""Server relocation: rectangular min-cost matching of servers onto locations.

Phase 3 keeps every cellset intact and only moves the servers: entry (s, l)
of the relocation matrix is the spread that server s's cells would incur if
the server stood at location l. An injective minimum-total matching of
servers to locations therefore minimizes the spread without touching the
cost.

The matching solver is a potential-based augmenting-path method (cubic in
the matrix size). Among equal-total matchings it returns the
lexicographically smallest one in row-major order, found by a greedy pass
over the zero-reduced-cost subgraph of the optimal potentials; this keeps
downstream outputs byte-stable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Assignment, Instance


@dataclass(frozen=True)
class RelocationMatrix:
    """Rows are the non-empty servers (identified by their current location,
    ascending); columns are all candidate locations."""

    servers: tuple[int, ...]
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != len(self.servers):
            raise ValueError("entries must have one row per server")
        if entries.shape[0] > entries.shape[1]:
            raise ValueError("more servers than candidate locations")
        if (entries < 0).any():
            raise ValueError("entries must be non-negative")
        entries.setflags(write=False)
        object.__setattr__(self, "servers", tuple(int(s) for s in self.servers))
        object.__setattr__(self, "entries", entries)


def build_matrix(instance: Instance, assignment: Assignment) -> RelocationMatrix:
    """Relocation costs for every non-empty server against every location."""
    w = instance.cell_totals
    servers = [l for l in assignment.server_locations if assignment.cells_of(l).size]
    rows = []
    for l in servers:
        cells = assignment.cells_of(l)
        rows.append((instance.fronthaul[cells] * w[cells, None]).sum(axis=0))
    return RelocationMatrix(tuple(servers), np.array(rows))


def _min_cost_square(cost: np.ndarray):
    """Optimal assignment on a square matrix via shortest augmenting paths.

    Returns (col_of_row, row_potentials, col_potentials). Column index ``n``
    is a virtual root used while growing alternating trees.
    """
    n = cost.shape[0]
    u = np.zeros(n)
    v = np.zeros(n + 1)
    row_of = np.full(n + 1, -1, dtype=int)
    for r in range(n):
        row_of[n] = r
        j0 = n
        min_to = np.full(n, np.inf)
        way = np.full(n, -1, dtype=int)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            r0 = row_of[j0]
            free = ~used[:n]
            free_idx = np.flatnonzero(free)
            slack = cost[r0, free_idx] - u[r0] - v[free_idx]
            better = slack < min_to[free_idx]
            min_to[free_idx[better]] = slack[better]
            way[free_idx[better]] = j0
            j1 = int(free_idx[np.argmin(min_to[free_idx])])
            delta = min_to[j1]
            used_idx = np.flatnonzero(used)
            u[row_of[used_idx]] += delta
            v[used_idx] -= delta
            min_to[free] -= delta
            j0 = j1
            if row_of[j0] == -1:
                break
        while j0 != n:
            j_prev = int(way[j0])
            row_of[j0] = row_of[j_prev]
            j0 = j_prev
    col_of = np.empty(n, dtype=int)
    col_of[row_of[:n]] = np.arange(n)
    return col_of, u, v[:n]


def _augment(row: int, tight, col_of, row_of, visited) -> bool:
    """Find an alternating path from ``row`` to a free column in the tight graph."""
    for c in np.flatnonzero(tight[row]):
        if visited[c]:
            continue
        visited[c] = True
        owner = int(row_of[c])
        if owner == -1 or _augment(owner, tight, col_of, row_of, visited):
            col_of[row] = c
            row_of[c] = row
            return True
    return False


def _lex_smallest(cost: np.ndarray, col_of: np.ndarray, u: np.ndarray, v: np.ndarray, n_real: int):
    """Rewire an optimal matching to the lexicographically smallest optimal one.

    Every optimal matching lives inside the tight subgraph of the optimal
    potentials, and every perfect matching of that subgraph is optimal; rows
    are canonicalized in order by trying smaller tight columns and
    re-matching the displaced row.
    """
    n = cost.shape[0]
    tol = 1e-9 * (1.0 + float(np.abs(cost).max()))
    tight = (cost - u[:, None] - v[None, :]) <= tol
    col_of = col_of.copy()
    row_of = np.full(n, -1, dtype=int)
    row_of[col_of] = np.arange(n)
    fixed = np.zeros(n, dtype=bool)
    for r in range(n_real):
        c_cur = int(col_of[r])
        for c in np.flatnonzero(tight[r]):
            c = int(c)
            if c >= c_cur:
                break
            if fixed[c]:
                continue
            saved_col_of = col_of.copy()
            saved_row_of = row_of.copy()
            displaced = int(row_of[c])
            freed = int(col_of[r])
            col_of[r] = c
            row_of[c] = r
            row_of[freed] = -1
            visited = fixed.copy()
            visited[c] = True
            if _augment(displaced, tight, col_of, row_of, visited):
                break
            col_of[:] = saved_col_of
            row_of[:] = saved_row_of
        fixed[col_of[r]] = True
    return col_of


def solve_matching(matrix: RelocationMatrix) -> dict[int, int]:
    """Injective minimum-total map from each server to a candidate location.

    Ties between equal-total matchings resolve to the row-major
    lexicographically smallest column choice.
    """
    m, n = matrix.entries.shape
    if m > n:
        raise ValueError("infeasible: more servers than locations")
    if not np.isfinite(matrix.entries).all():
        raise ValueError("entries must be finite")
    padded = np.zeros((n, n))
    padded[:m] = matrix.entries
    col_of, u, v = _min_cost_square(padded)
    col_of = _lex_smallest(padded, col_of, u, v, m)
    return {server: int(col_of[r]) for r, server in enumerate(matrix.servers)}


def matching_total(matrix: RelocationMatrix, match: dict[int, int]) -> float:
    """Total relocation cost of a matching, summed in row order."""
    total = 0.0
    for r, server in enumerate(matrix.servers):
        total += matrix.entries[r, match[server]]
    return float(total)


def relocate(instance: Instance, assignment: Assignment) -> Assignment:
    """Move every non-empty server to its matched location, carrying its cells.

    Empty server slots are re-seated on the lowest-index unused candidate
    locations so the server count is preserved. The cell partition is intact,
    so the cost is unchanged; the identity relocation is always feasible, so
    the spread never increases.
    """
    matrix = build_matrix(instance, assignment)
    match = solve_matching(matrix)
    new_map = np.empty_like(assignment.cell_to_location)
    for server, target in match.items():
        new_map[assignment.cells_of(server)] = target
    used = set(match.values())
    n_empty = instance.n_servers - len(matrix.servers)
    refill = [l for l in range(instance.n_candidates) if l not in used][:n_empty]
    new_locs = tuple(sorted(used | set(refill)))
    return Assignment(new_locs, new_map)
