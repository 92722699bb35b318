"""Trajectory -> point cloud -> barcode -> shape report."""
from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import Trajectory
from .ph import Barcode, build_filtration, enclosing_radius_squared, reduce
from .pointcloud import (IterationInterval, PointCloud, SquaredDistanceMatrix, edge_contact_report,
                         extract_cloud, squared_distance_matrix)
from .presets import ScenarioPreset
from .shapes import ShapeReport, SignificancePolicy, classify


@dataclass
class Analysis:
    cloud: PointCloud
    matrix: SquaredDistanceMatrix
    barcode: Barcode
    threshold: object
    warnings: list = field(default_factory=list)

    @property
    def enclosing_radius_squared(self):
        return enclosing_radius_squared(self.matrix) if self.matrix.n else None


def analyze(traj: Trajectory, strategy, interval: IterationInterval, time_scale=1,
            threshold=None, max_simplices=None) -> Analysis:
    """Barcode (dimensions 0-2) of the strategy's space-time cloud.

    ``threshold`` is a squared scale; None uses the enclosing radius.
    """
    cloud = extract_cloud(traj, strategy, interval, time_scale)
    m = squared_distance_matrix(cloud)
    warnings = []
    if not len(cloud):
        warnings.append(f"strategy {strategy.value} does not occur in [{interval.start}, {interval.end}]")
    contacts = edge_contact_report(traj, strategy, interval)
    if contacts:
        frames = ", ".join(str(c.t) for c in contacts[:10]) + (" ..." if len(contacts) > 10 else "")
        warnings.append(f"other strategies touch the lattice border inside the {strategy.value} "
                        f"region at t = {frames}; holes or voids there may be missed")
    f = build_filtration(m, 3, threshold, max_simplices)
    return Analysis(cloud, m, reduce(f), f.threshold, warnings)


def classify_analysis(a: Analysis, policy: SignificancePolicy = SignificancePolicy()) -> ShapeReport:
    return classify(a.barcode, policy, a.warnings)


def run_preset(preset: ScenarioPreset, seed: int = 0, threshold=None, policy=None):
    """Simulate (or load) the preset and classify it: (trajectory, analysis, report)."""
    preset = preset.with_seed(seed)
    traj = preset.run()
    iv = preset.analysis_interval(traj)
    a = analyze(traj, preset.strategy, iv, 1, preset.threshold if threshold is None else threshold)
    return traj, a, classify_analysis(a, policy or preset.policy)
