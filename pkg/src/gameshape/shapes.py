"""Significant Betti counts on a scale window and the three-shape taxonomy.

Shape 1: one solid component (b0 = 1, nothing else).
Shape 2: one component enclosing m stable clusters (b1 = m).
Shape 3: one component enclosing m transient invasions (b2 = m).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .ph.reduction import Barcode, exact_square, render


@dataclass(frozen=True)
class SignificancePolicy:
    """Window ``(window_low, window_high]`` on the squared scale.

    ``min_persistence`` is a length in epsilon units; None (the default)
    demands that a bar covers the whole window.
    """
    window_low_sq: object = 2
    window_high_sq: object = 4
    min_persistence: Optional[float] = None

    def __post_init__(self):
        if not 0 <= self.window_low_sq < self.window_high_sq:
            raise ValueError("window must satisfy 0 <= low < high")
        if self.min_persistence is not None and self.min_persistence < 0:
            raise ValueError("min_persistence must be non-negative")

    @classmethod
    def from_eps(cls, low, high, min_persistence=None) -> "SignificancePolicy":
        return cls(exact_square(low), exact_square(high), min_persistence)

    def describe(self) -> str:
        rule = ("full window" if self.min_persistence is None
                else f"overlap >= {self.min_persistence:g}")
        return f"window ({render(self.window_low_sq)}, {render(self.window_high_sq)}], {rule}"


def _significant(bar, p: SignificancePolicy) -> bool:
    lo, hi = p.window_low_sq, p.window_high_sq
    if p.min_persistence is None:
        return bar.birth <= lo and (bar.death is None or bar.death >= hi)
    start = max(bar.birth, lo)
    end = hi if bar.death is None else min(bar.death, hi)
    if end <= start:
        return False
    return math.sqrt(end) - math.sqrt(start) >= p.min_persistence


def significant_bars(b: Barcode, p: SignificancePolicy) -> list:
    """Bars of dimension >= 1 counted as significant under ``p``."""
    keep = [bar for bar in b.bars if bar.dim >= 1 and _significant(bar, p)]
    return Barcode(keep, b.n_points, b.threshold).sorted()


def significant_features(b: Barcode, p: SignificancePolicy) -> tuple:
    """(b0, b1, b2): components alive at the window top, significant holes and voids."""
    b0 = sum(1 for bar in b.bars if bar.dim == 0 and bar.alive_at_squared(p.window_high_sq))
    counts = [b0, 0, 0]
    for bar in significant_bars(b, p):
        if bar.dim <= 2:
            counts[bar.dim] += 1
    return tuple(counts)


@dataclass
class ShapeReport:
    b0: int
    b1: int
    b2: int
    classification: str
    policy: SignificancePolicy
    bars: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def betti(self) -> tuple:
        return (self.b0, self.b1, self.b2)

    def render(self) -> str:
        lines = [f"classification: {self.classification}",
                 f"betti: b0={self.b0} b1={self.b1} b2={self.b2}",
                 f"policy: {self.policy.describe()}"]
        lines += [f"significant: {bar}" for bar in self.bars]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines) + "\n"


def shape_label(b0: int, b1: int, b2: int) -> str:
    if b0 != 1:
        return "Unclassified"
    if b1 == 0 and b2 == 0:
        return "Shape1"
    if b2 == 0:
        return f"Shape2({b1})"
    if b1 == 0:
        return f"Shape3({b2})"
    return f"Combined({b1}, {b2})"


def classify(b: Barcode, p: SignificancePolicy = SignificancePolicy(), warnings=()) -> ShapeReport:
    b0, b1, b2 = significant_features(b, p)
    notes = list(warnings)
    if b.n_points == 0:
        notes.append("empty point cloud: the strategy never occurs in the interval")
    label = shape_label(b0, b1, b2)
    if label == "Unclassified" and b.n_points:
        notes.append(f"{b0} components at scale {render(p.window_high_sq)}; the shapes need exactly one")
    if b.threshold is not None and b.threshold < p.window_high_sq:
        notes.append(f"filtration stops at {render(b.threshold)}, below the window top; "
                     "bars reaching the threshold are treated as alive")
    return ShapeReport(b0, b1, b2, label, p, significant_bars(b, p), notes)
