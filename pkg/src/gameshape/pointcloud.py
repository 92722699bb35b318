"""Space-time point clouds from trajectories, with exact squared distances.

A cell holding the strategy of interest at frame ``t`` becomes the point
``(x, y, t)``.  Distances stay exact: with ``time_scale = p/q`` every squared
distance is ``(q^2 (dx^2 + dy^2) + p^2 dt^2) / q^2``, stored as an int64
numerator matrix plus the common denominator ``q^2``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .lattice import Coord, PreconditionError, Trajectory, neighbor_table


@dataclass(frozen=True)
class IterationInterval:
    start: int
    end: int  # inclusive

    def __post_init__(self):
        if self.start > self.end:
            raise PreconditionError(f"interval start {self.start} exceeds end {self.end}")

    @classmethod
    def parse(cls, text: str) -> "IterationInterval":
        a, sep, b = text.partition(":")
        if not sep:
            raise ValueError(f"interval must look like A:B, got {text!r}")
        return cls(int(a), int(b))

    def __contains__(self, t) -> bool:
        return self.start <= t <= self.end


def as_fraction(value) -> Fraction:
    """Exact positive rational from an int, Fraction, or decimal string/float."""
    frac = Fraction(str(value)) if isinstance(value, (float, str)) else Fraction(value)
    if frac <= 0:
        raise ValueError(f"time scale must be positive, got {value}")
    return frac


@dataclass
class PointCloud:
    points: np.ndarray  # (n, 3) int64 rows of x, y, t
    time_scale: Fraction = Fraction(1)
    strategy: object = None
    interval: IterationInterval = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.int64).reshape(-1, 3)
        self.time_scale = as_fraction(self.time_scale)

    def __len__(self):
        return len(self.points)

    def as_tuples(self) -> list:
        return [tuple(int(v) for v in p) for p in self.points]


@dataclass
class SquaredDistanceMatrix:
    """Squared distances ``entries / denominator`` (denominator 1 for integer clouds)."""
    entries: np.ndarray
    denominator: int = 1

    @property
    def n(self) -> int:
        return len(self.entries)

    def value(self, i: int, j: int):
        v = int(self.entries[i, j])
        return v if self.denominator == 1 else Fraction(v, self.denominator)

    def to_units(self, squared) -> Fraction:
        """Convert a squared distance into numerator units (exact)."""
        return Fraction(squared) * self.denominator

    def from_units(self, units):
        if units is None:
            return None
        if self.denominator == 1:
            return int(units)
        f = Fraction(int(units), self.denominator)
        return int(f) if f.denominator == 1 else f


def extract_cloud(traj: Trajectory, s, iv: IterationInterval, time_scale=1) -> PointCloud:
    """One point per (cell, frame) holding ``s`` for frames with ``t`` in ``iv``."""
    ts = traj.iterations
    if not ts or iv.start < ts[0] or iv.end > ts[-1]:
        span = f"[{ts[0]}, {ts[-1]}]" if ts else "empty"
        raise PreconditionError(f"interval [{iv.start}, {iv.end}] outside trajectory range {span}")
    rows = []
    for t, lat in traj.frames:
        if t not in iv:
            continue
        w = lat.width
        for i, cell in enumerate(lat.cells):
            if cell.strategy is s:
                rows.append((i % w, i // w, t))
    return PointCloud(np.array(rows, dtype=np.int64).reshape(-1, 3), time_scale, s, iv)


def squared_distance_matrix(pc: PointCloud) -> SquaredDistanceMatrix:
    p, q = pc.time_scale.numerator, pc.time_scale.denominator
    pts = pc.points
    dx = pts[:, None, 0] - pts[None, :, 0]
    dy = pts[:, None, 1] - pts[None, :, 1]
    dt = pts[:, None, 2] - pts[None, :, 2]
    entries = q * q * (dx * dx + dy * dy) + p * p * dt * dt
    return SquaredDistanceMatrix(entries, q * q)


@dataclass
class EdgeContact:
    t: int
    cells: list = field(default_factory=list)  # Coord of intruding cells on the border


def edge_contact_report(traj: Trajectory, s, iv: IterationInterval) -> list:
    """Frames where another strategy sits on the lattice border next to ``s``.

    Only frames where ``s`` holds a strict majority count (the region is
    dominated by ``s``); an intruder is flagged when it touches at least one
    ``s`` cell, i.e. it is embedded in the ``s`` region but cut off by the
    border, which can hide a hole or void from the analysis.
    """
    report = []
    for t, lat in traj.frames:
        if t not in iv:
            continue
        cells = lat.cells
        n_s = sum(1 for c in cells if c.strategy is s)
        if 2 * n_s <= len(cells):
            continue
        w, h = lat.width, lat.height
        table = neighbor_table(w, h)
        hits = []
        for i, cell in enumerate(cells):
            x, y = i % w, i // w
            if cell.strategy is s or not (x in (0, w - 1) or y in (0, h - 1)):
                continue
            if any(cells[j].strategy is s for j in table[i]):
                hits.append(Coord(x, y))
        if hits:
            report.append(EdgeContact(t, hits))
    return report


def frozen_intervals(traj: Trajectory, k: int = 5) -> list:
    """Maximal runs of at least ``k`` consecutive frames with identical occupancy.

    A convenience heuristic for trimming analysis intervals, nothing more.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    out = []
    frames = traj.occupancy_table()
    start = 0
    for i in range(1, len(frames) + 1):
        if i == len(frames) or frames[i][1] != frames[i - 1][1]:
            if i - start >= k:
                out.append(IterationInterval(frames[start][0], frames[i - 1][0]))
            start = i
    return out


def is_frozen(traj: Trajectory, k: int = 5) -> bool:
    """True when the final ``k`` frames share the same occupancy."""
    runs = frozen_intervals(traj, k)
    return bool(runs) and runs[-1].end == traj.iterations[-1]


def cloud_to_csv(pc: PointCloud) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "t"])
    w.writerows(pc.as_tuples())
    return buf.getvalue()


def distances_to_csv(m: SquaredDistanceMatrix) -> str:
    """Lower triangle (diagonal included), one row per point, squared values."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for i in range(m.n):
        w.writerow([str(m.value(i, j)) for j in range(i + 1)])
    return buf.getvalue()
