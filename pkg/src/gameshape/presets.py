"""Scenario presets: the worked cases, the two-strategy baselines and a
single-frame three-hole example.

Cases 3-5 are crafted trajectories (a stochastic 1000-iteration run cannot be
replayed), shipped as frame files under ``fixtures/`` and regenerable with
:func:`crafted_trajectory`.  Case 2's two clusters are a reconstruction.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Callable, Optional

from .efg import EfgConfig, center_fires, efg_run
from .lattice import Cell, Lattice, Trajectory, parse_frame, parse_trajectory
from .pd import PdConfig, initial_lattice, pd_run
from .pointcloud import IterationInterval
from .shapes import SignificancePolicy
from .strategies import EfgState, PdStrategy

D, C, T, A = (s.value for s in PdStrategy)
PAPER_PAYOFFS = dict(T=2, R=1, P=0, S=-1, SS=2, MS=4)


@dataclass
class ScenarioPreset:
    name: str
    game: str
    config: object                  # PdConfig or EfgConfig
    iterations: int
    strategy: object
    interval: Optional[IterationInterval] = None   # None: whole trajectory
    threshold: object = 4           # squared filtration threshold
    policy: SignificancePolicy = field(default_factory=SignificancePolicy)
    initial: Optional[Callable] = None            # seed -> Lattice
    fixture: Optional[str] = None                 # crafted trajectory file
    description: str = ""

    def with_seed(self, seed: int) -> "ScenarioPreset":
        return replace(self, config=replace(self.config, seed=seed))

    def initial_lattice(self, seed: Optional[int] = None) -> Lattice:
        if self.initial is None:
            raise ValueError(f"preset {self.name} replays a fixture and has no initial lattice")
        return self.initial(self.config.seed if seed is None else seed)

    def run(self, iterations: Optional[int] = None) -> Trajectory:
        """Simulate (or load, for fixture presets) the trajectory."""
        if self.fixture is not None:
            return load_fixture_trajectory(self.fixture)
        n = self.iterations if iterations is None else iterations
        lat = self.initial_lattice()
        if self.game == "efg":
            return efg_run(replace(self.config, iterations=n), lat)
        return pd_run(self.config, lat, n)

    def analysis_interval(self, traj: Trajectory) -> IterationInterval:
        if self.interval is not None:
            return self.interval
        ts = traj.iterations
        return IterationInterval(ts[0], ts[-1])


# -- initial lattices -----------------------------------------------------------

def case1_rows() -> list:
    """7x7, split vertically: Defectors on the left, TFT on the right.

    49 cells cannot be halved, so the middle column is shared: its lower
    three cells are Defectors (24 D, 25 TFT).
    """
    rows = []
    for y in range(6, -1, -1):
        rows.append(D * 3 + (D if y < 3 else T) + T * 3)
    return rows


CASE2_CLUSTERS = ((2, 2), (2, 3), (4, 2), (4, 3))  # two vertical TFT dominoes


def case2_rows() -> list:
    grid = [[D] * 7 for _ in range(7)]
    for x, y in CASE2_CLUSTERS:
        grid[y][x] = T
    return ["".join(grid[y]) for y in range(6, -1, -1)]


FIG3_HOLES = ((2, 2), (6, 3), (4, 7))


def fig3_rows() -> list:
    """10x10 single frame: Defectors (the data strategy) with three
    isolated single-cell Cooperator patches."""
    grid = [[D] * 10 for _ in range(10)]
    for x, y in FIG3_HOLES:
        grid[y][x] = C
    return ["".join(grid[y]) for y in range(9, -1, -1)]


def mixed_lattice(strategies, seed: int, width: int = 10, height: int = 10, cfg: PdConfig = None) -> Lattice:
    """Equal shares of ``strategies`` shuffled over the lattice.

    The layout uses its own generator, ``random.Random(10000 + seed)``, so
    the simulation stream itself is untouched.
    """
    n = width * height
    labels = [strategies[i % len(strategies)] for i in range(n)]
    random.Random(10_000 + seed).shuffle(labels)
    ss = cfg.SS if cfg is not None else PAPER_PAYOFFS["SS"]
    return Lattice(width, height, [Cell(s, ss) for s in labels], "pd")


BASELINE_PAIRS = {
    "baseline-a": tuple(PdStrategy),
    "baseline-b": (PdStrategy.DEFECTOR, PdStrategy.COOPERATOR),
    "baseline-c": (PdStrategy.DEFECTOR, PdStrategy.TIT_FOR_TAT),
    "baseline-d": (PdStrategy.DEFECTOR, PdStrategy.ANTI_TIT_FOR_TAT),
    "baseline-e": (PdStrategy.COOPERATOR, PdStrategy.TIT_FOR_TAT),
    "baseline-f": (PdStrategy.COOPERATOR, PdStrategy.ANTI_TIT_FOR_TAT),
    "baseline-g": (PdStrategy.TIT_FOR_TAT, PdStrategy.ANTI_TIT_FOR_TAT),
}


# -- crafted trajectories for cases 3-5 -------------------------------------------

CRAFTED = {
    # name: (first iteration, frame count, {(x, y): (strategy, first t, last t)})
    "case3": (596, 26, [((3, 3), A, 603, 610), ((3, 4), A, 603, 610)]),
    "case4": (501, 10, [((2, 2), A, 503, 504), ((4, 4), A, 507, 508)]),
    "case5": (425, 26, [((2, 4), T, 425, 450), ((4, 2), A, 430, 432), ((4, 4), A, 440, 441)]),
}


def crafted_trajectory(name: str) -> Trajectory:
    """7x7 Defector lattice with short invasions (and, for case5, a stable
    TFT column), ages and scores left at the starting score."""
    start, count, events = CRAFTED[name]
    ss = PAPER_PAYOFFS["SS"]
    traj = Trajectory(game="pd", seed=None, digest=f"crafted-{name}")
    for t in range(start, start + count):
        grid = [[D] * 7 for _ in range(7)]
        for (x, y), s, t0, t1 in events:
            if t0 <= t <= t1:
                grid[y][x] = s
        lat = Lattice.from_rows(["".join(grid[y]) for y in range(6, -1, -1)], "pd", ss)
        traj.frames.append((t, lat))
    return traj


def fixture_text(name: str) -> str:
    return resources.files("gameshape").joinpath("fixtures").joinpath(f"{name}.txt").read_text()


def load_fixture_frame(name: str) -> Lattice:
    return parse_frame(fixture_text(name), default_score=PAPER_PAYOFFS["SS"])


def load_fixture_trajectory(name: str) -> Trajectory:
    return parse_trajectory(fixture_text(name), default_score=PAPER_PAYOFFS["SS"])


# -- registry -----------------------------------------------------------------

def _pd(**kw) -> PdConfig:
    return PdConfig(**{**PAPER_PAYOFFS, **kw})


def _build() -> dict:
    presets = {}
    cfg7 = _pd(width=7, height=7)
    presets["case1"] = ScenarioPreset(
        "case1", "pd", cfg7, 25, PdStrategy.DEFECTOR, IterationInterval(0, 25), 4,
        initial=lambda seed: initial_lattice(case1_rows(), cfg7),
        description="Defectors vs TFT, halves of a 7x7 lattice, 25 iterations")
    presets["case2"] = ScenarioPreset(
        "case2", "pd", cfg7, 30, PdStrategy.DEFECTOR, IterationInterval(0, 29), 5,
        initial=lambda seed: load_fixture_frame("case2_initial"),
        description="two TFT clusters inside Defectors, 7x7, 30 iterations")
    crafted_cfg = _pd(width=7, height=7, mu=0.05, zeta=20)
    for name, what in (("case3", "one longer unsuccessful ATFT invasion"),
                       ("case4", "two short unsuccessful ATFT invasions"),
                       ("case5", "a stable TFT cluster plus two ATFT invasions")):
        start, count, _ = CRAFTED[name]
        presets[name] = ScenarioPreset(
            name, "pd", crafted_cfg, count - 1, PdStrategy.DEFECTOR,
            IterationInterval(start, start + count - 1), 5, fixture=name,
            description=f"crafted trajectory: {what} in a Defector lattice")
    for name, ma in (("case6a", 2), ("case6b", 4)):
        ecfg = EfgConfig(MA=ma, width=12, height=12, iterations=20)
        presets[name] = ScenarioPreset(
            name, "efg", ecfg, 20, EfgState.FIRE, IterationInterval(0, 20), 4,
            initial=lambda seed, ecfg=ecfg: center_fires(ecfg),
            description=f"Earth-Fire-Grass, MA={ma}, four central fires, 12x12, 20 steps")
    base_cfg = _pd(width=10, height=10)
    for name, pair in BASELINE_PAIRS.items():
        presets[name] = ScenarioPreset(
            name, "pd", base_cfg, 100, pair[0], IterationInterval(90, 100), 4,
            initial=lambda seed, pair=pair: mixed_lattice(pair, seed, cfg=base_cfg),
            description="equal shuffled mix of " + ", ".join(s.name.lower() for s in pair)
                        + ", 10x10, 100 iterations, no mutation or age death")
    presets["fig3"] = ScenarioPreset(
        "fig3", "pd", _pd(width=10, height=10), 0, PdStrategy.DEFECTOR, IterationInterval(0, 0), 5,
        initial=lambda seed: load_fixture_frame("fig3"),
        description="single 10x10 frame with three isolated single-cell patches")
    return presets


PRESETS = _build()


def get_preset(name: str) -> ScenarioPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None
