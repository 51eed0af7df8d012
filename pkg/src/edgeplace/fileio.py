"""File formats and event-record aggregation.

All formats are plain text: UTF-8, LF line endings, '.' decimal separator.
Floats are written with Python's shortest round-trip representation, so a
write/read cycle reproduces every value bit for bit.

Instance file (line oriented)::

    edgeplace-instance 1
    cells <n_cells>
    candidates <n_candidates>
    servers <n_servers>
    capacity <W>
    grid <rows> <cols> <cell_size> <origin_x> <origin_y>    # optional
    cell_coords
    <x> <y>                                                 # n_cells lines
    candidate_coords
    <x> <y>                                                 # n_candidates lines
    workload
    <i> <j> <w>                                             # sparse, i <= j
    fronthaul                                               # optional section
    <d_0> ... <d_{n_candidates-1}>                          # n_cells lines
    end

The fronthaul section is omitted when the matrix equals the Euclidean
distances implied by the coordinates (the reader recomputes it).

Assignment CSV: header ``kind,index,location``; one ``server`` row per slot
(index is the slot position) and one ``cell`` row per cell.

Report CSV: header
``algo,capacity,loc_seed,init_seed,cost,spread,max_load,min_load,wall_ms``;
one row per run.

Event CSV: header ``ax,ay,bx,by,weight``; one undirected record per line.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .model import Assignment, GridSpec, Instance


class ParseError(ValueError):
    """Malformed content; message names the 1-based line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SchemaError(ValueError):
    """Structurally valid file with inconsistent dimensions or counts."""


def _fmt(x) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# instance format


def write_instance(instance: Instance, path) -> None:
    lines = [
        "edgeplace-instance 1",
        f"cells {instance.n_cells}",
        f"candidates {instance.n_candidates}",
        f"servers {instance.n_servers}",
        f"capacity {_fmt(instance.capacity)}",
    ]
    if instance.grid is not None:
        g = instance.grid
        lines.append(
            f"grid {g.rows} {g.cols} {_fmt(g.cell_size)} {_fmt(g.origin[0])} {_fmt(g.origin[1])}"
        )
    lines.append("cell_coords")
    for x, y in instance.cell_coords:
        lines.append(f"{_fmt(x)} {_fmt(y)}")
    lines.append("candidate_coords")
    for x, y in instance.candidate_coords:
        lines.append(f"{_fmt(x)} {_fmt(y)}")
    lines.append("workload")
    w = instance.workload
    for i, j in zip(*np.triu_indices(instance.n_cells)):
        if w[i, j] != 0.0:
            lines.append(f"{i} {j} {_fmt(w[i, j])}")
    if not instance.has_euclidean_fronthaul():
        lines.append("fronthaul")
        for row in instance.fronthaul:
            lines.append(" ".join(_fmt(x) for x in row))
    lines.append("end")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class _LineReader:
    def __init__(self, path):
        self.lines = Path(path).read_text(encoding="utf-8").splitlines()
        self.pos = 0

    @property
    def line_no(self) -> int:
        return self.pos  # 1-based number of the line just read

    def next(self, expect: str | None = None) -> str:
        if self.pos >= len(self.lines):
            raise ParseError(self.pos + 1, "unexpected end of file")
        line = self.lines[self.pos].strip()
        self.pos += 1
        if expect is not None and not line.startswith(expect):
            raise ParseError(self.pos, f"expected {expect!r}, got {line!r}")
        return line

    def peek(self) -> str | None:
        return self.lines[self.pos].strip() if self.pos < len(self.lines) else None


def _parse_floats(reader: _LineReader, count: int) -> list[float]:
    line = reader.next()
    parts = line.split()
    if len(parts) != count:
        raise ParseError(reader.line_no, f"expected {count} values, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ParseError(reader.line_no, f"bad number in {line!r}") from None


def read_instance(path) -> Instance:
    r = _LineReader(path)
    header = r.next("edgeplace-instance")
    if header.split() != ["edgeplace-instance", "1"]:
        raise ParseError(r.line_no, f"unsupported header {header!r}")

    def int_field(name: str) -> int:
        line = r.next(name)
        try:
            return int(line.split()[1])
        except (IndexError, ValueError):
            raise ParseError(r.line_no, f"bad {name} line {line!r}") from None

    n_cells = int_field("cells")
    n_candidates = int_field("candidates")
    n_servers = int_field("servers")
    cap_line = r.next("capacity").split()
    if len(cap_line) != 2:
        raise ParseError(r.line_no, "bad capacity line")
    capacity = float(cap_line[1])
    grid = None
    if r.peek() is not None and r.peek().startswith("grid"):
        parts = r.next().split()
        if len(parts) != 6:
            raise ParseError(r.line_no, "grid line needs rows cols cell_size ox oy")
        grid = GridSpec(int(parts[1]), int(parts[2]), float(parts[3]), (float(parts[4]), float(parts[5])))
    r.next("cell_coords")
    cells = np.array([_parse_floats(r, 2) for _ in range(n_cells)])
    r.next("candidate_coords")
    cands = np.array([_parse_floats(r, 2) for _ in range(n_candidates)])
    r.next("workload")
    w = np.zeros((n_cells, n_cells))
    while True:
        line = r.next()
        if line in ("fronthaul", "end"):
            break
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(r.line_no, f"workload triple needs 'i j w', got {line!r}")
        try:
            i, j, val = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(r.line_no, f"bad workload triple {line!r}") from None
        if not (0 <= i <= j < n_cells):
            raise SchemaError(f"workload triple ({i}, {j}) out of range for {n_cells} cells")
        w[i, j] = val
        w[j, i] = val
    fronthaul = None
    if line == "fronthaul":
        fronthaul = np.array([_parse_floats(r, n_candidates) for _ in range(n_cells)])
        r.next("end")
    try:
        return Instance(cells, cands, w, n_servers, capacity, fronthaul=fronthaul, grid=grid)
    except ValueError as e:
        raise SchemaError(str(e)) from None


# ---------------------------------------------------------------------------
# assignment format


def write_assignment(assignment: Assignment, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["kind", "index", "location"])
        for slot, loc in enumerate(assignment.server_locations):
            writer.writerow(["server", slot, loc])
        for i, loc in enumerate(assignment.cell_to_location):
            writer.writerow(["cell", i, int(loc)])


def read_assignment(path) -> Assignment:
    servers: list[int] = []
    cells: dict[int, int] = {}
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(1, "empty assignment file") from None
        if header != ["kind", "index", "location"]:
            raise ParseError(1, f"bad header {header!r}")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise ParseError(line_no, f"expected 3 fields, got {len(row)}")
            kind, index, location = row
            try:
                index, location = int(index), int(location)
            except ValueError:
                raise ParseError(line_no, f"bad integers in {row!r}") from None
            if kind == "server":
                servers.append(location)
            elif kind == "cell":
                cells[index] = location
            else:
                raise ParseError(line_no, f"unknown kind {kind!r}")
    if sorted(cells) != list(range(len(cells))):
        raise SchemaError("cell rows must cover 0..n_cells-1 exactly once")
    cmap = np.array([cells[i] for i in range(len(cells))], dtype=np.int64)
    return Assignment(tuple(servers), cmap)


# ---------------------------------------------------------------------------
# report format

REPORT_COLUMNS = (
    "algo",
    "capacity",
    "loc_seed",
    "init_seed",
    "cost",
    "spread",
    "max_load",
    "min_load",
    "wall_ms",
)


@dataclass(frozen=True)
class RunRow:
    """One solver run; ``max_load``/``min_load`` are over non-empty servers."""

    algo: str
    capacity: float
    loc_seed: int
    init_seed: int
    cost: float
    spread: float
    max_load: float
    min_load: float
    wall_ms: float


def write_report(rows: Iterable[RunRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for r in rows:
            writer.writerow(
                [
                    r.algo,
                    _fmt(r.capacity),
                    r.loc_seed,
                    r.init_seed,
                    _fmt(r.cost),
                    _fmt(r.spread),
                    _fmt(r.max_load),
                    _fmt(r.min_load),
                    f"{r.wall_ms:.3f}",
                ]
            )


def read_report(path) -> list[RunRow]:
    out = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != list(REPORT_COLUMNS):
            raise ParseError(1, f"bad report header {header!r}")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(REPORT_COLUMNS):
                raise ParseError(line_no, f"expected {len(REPORT_COLUMNS)} fields")
            try:
                out.append(
                    RunRow(
                        algo=row[0],
                        capacity=float(row[1]),
                        loc_seed=int(row[2]),
                        init_seed=int(row[3]),
                        cost=float(row[4]),
                        spread=float(row[5]),
                        max_load=float(row[6]),
                        min_load=float(row[7]),
                        wall_ms=float(row[8]),
                    )
                )
            except ValueError:
                raise ParseError(line_no, f"bad values in {row!r}") from None
    return out


# ---------------------------------------------------------------------------
# event records and grid aggregation


@dataclass(frozen=True)
class EventRecord:
    """One undirected interaction between two points, e.g. a call record."""

    ax: float
    ay: float
    bx: float
    by: float
    weight: float
    line: int | None = None  # source line when read from a file

    def __post_init__(self):
        if not self.weight > 0:
            raise ValueError("weight must be positive")


def write_events(records: Iterable[EventRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["ax", "ay", "bx", "by", "weight"])
        for rec in records:
            writer.writerow([_fmt(rec.ax), _fmt(rec.ay), _fmt(rec.bx), _fmt(rec.by), _fmt(rec.weight)])


def read_events(path) -> list[EventRecord]:
    out = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != ["ax", "ay", "bx", "by", "weight"]:
            raise ParseError(1, f"bad events header {header!r}")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 5:
                raise ParseError(line_no, f"expected 5 fields, got {len(row)}")
            try:
                values = [float(x) for x in row]
            except ValueError:
                raise ParseError(line_no, f"bad number in {row!r}") from None
            if values[4] <= 0:
                raise ParseError(line_no, "weight must be positive")
            out.append(EventRecord(*values, line=line_no))
    return out


def _bin_point(grid: GridSpec, x: float, y: float) -> int | None:
    """Row-major cell index with half-open bins; exact top/right edges clamp
    inward; None when outside the grid."""
    ox, oy = grid.origin
    col = math.floor((x - ox) / grid.cell_size)
    row = math.floor((y - oy) / grid.cell_size)
    if col == grid.cols and x == ox + grid.cols * grid.cell_size:
        col -= 1
    if row == grid.rows and y == oy + grid.rows * grid.cell_size:
        row -= 1
    if not (0 <= col < grid.cols and 0 <= row < grid.rows):
        return None
    return row * grid.cols + col


def aggregate_events(
    records: Iterable[EventRecord], grid: GridSpec, strict: bool = True
) -> tuple[np.ndarray, int]:
    """Bin event endpoints onto the grid and accumulate a normalized
    symmetric workload matrix.

    Returns ``(workload, n_dropped)``. In strict mode an out-of-grid record
    raises ``ValueError`` naming the record; in lenient mode it is dropped
    and counted.
    """
    n = grid.n_cells
    w = np.zeros((n, n))
    dropped = 0
    for k, rec in enumerate(records):
        ca = _bin_point(grid, rec.ax, rec.ay)
        cb = _bin_point(grid, rec.bx, rec.by)
        if ca is None or cb is None:
            where = f"line {rec.line}" if rec.line is not None else f"record {k}"
            if strict:
                raise ValueError(f"{where}: endpoint outside the grid")
            dropped += 1
            continue
        i, j = min(ca, cb), max(ca, cb)
        w[i, j] += rec.weight
    total = np.triu(w).sum()
    if total <= 0:
        raise ValueError("no in-grid events to aggregate")
    w /= total
    w = np.triu(w)
    return w + np.triu(w, 1).T, dropped


def instance_from_events(
    records: Iterable[EventRecord],
    grid: GridSpec,
    n_servers: int,
    capacity: float,
    candidate_coords: np.ndarray,
    strict: bool = True,
) -> Instance:
    """Build a full instance from raw events on a grid."""
    workload, _ = aggregate_events(records, grid, strict=strict)
    return Instance(
        grid.cell_centers(), candidate_coords, workload, n_servers, capacity, grid=grid
    )
