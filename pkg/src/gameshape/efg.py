"""Earth-Fire-Grass: a cyclic SIRS cellular automaton (grass -> fire -> earth -> grass).

A step is computed synchronously from the pre-step lattice:

* a Fire ages by one; if that brings its age to MA it turns to Earth (age 0)
  and ignites nothing, so a fire is present for exactly MA frames;
* every other Fire picks one Grass neighbour uniformly at random (if it has
  any); picked Grass becomes Fire at age 0, once, however many fires
  picked it;
* an Earth ages by one and turns to Grass (age 0) when its age reaches MA;
* unpicked Grass is left untouched.

Fire selection is the only randomness: one ``randrange`` per igniting fire,
fires visited in row-major order.
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import asdict, dataclass

from .lattice import Cell, Lattice, Trajectory, neighbor_table, record_frame
from .pd import ConfigError
from .strategies import EfgState

EARTH, FIRE, GRASS = EfgState.EARTH, EfgState.FIRE, EfgState.GRASS


@dataclass(frozen=True)
class EfgConfig:
    MA: int = 2
    width: int = 12
    height: int = 12
    seed: int = 0
    iterations: int = 20

    def __post_init__(self):
        if self.MA < 1:
            raise ConfigError(f"maximum age must be at least 1, got {self.MA}")
        if self.width < 1 or self.height < 1:
            raise ConfigError("lattice dimensions must be positive")
        if self.iterations < 0:
            raise ConfigError("iterations must be non-negative")

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def efg_step(lat: Lattice, cfg: EfgConfig, rng: random.Random) -> Lattice:
    table = neighbor_table(lat.width, lat.height)
    old = lat.cells
    cells = list(old)
    ignited = set()
    for i, cell in enumerate(old):
        s = cell.strategy
        if s is FIRE:
            age = cell.age + 1
            if age >= cfg.MA:
                cells[i] = Cell(EARTH, 0, 0)
                continue
            grass = [j for j in table[i] if old[j].strategy is GRASS]
            if grass:
                ignited.add(grass[rng.randrange(len(grass))])
            cells[i] = Cell(FIRE, 0, age)
        elif s is EARTH:
            age = cell.age + 1
            cells[i] = Cell(GRASS, 0, 0) if age >= cfg.MA else Cell(EARTH, 0, age)
    for j in ignited:
        cells[j] = Cell(FIRE, 0, 0)
    return Lattice(lat.width, lat.height, cells, lat.game)


def center_fires(cfg: EfgConfig, size: int = 2) -> Lattice:
    """All-grass lattice with a ``size`` x ``size`` block of fire in the middle."""
    w, h = cfg.width, cfg.height
    cells = [Cell(GRASS)] * (w * h)
    x0, y0 = (w - size) // 2, (h - size) // 2
    for y in range(y0, y0 + size):
        for x in range(x0, x0 + size):
            cells[y * w + x] = Cell(FIRE)
    return Lattice(w, h, cells, "efg")


def efg_run(cfg: EfgConfig, initial: Lattice) -> Trajectory:
    if (initial.width, initial.height) != (cfg.width, cfg.height):
        raise ConfigError(f"lattice is {initial.width}x{initial.height} but config says {cfg.width}x{cfg.height}")
    rng = random.Random(cfg.seed)
    traj = Trajectory(game="efg", seed=cfg.seed, digest=cfg.digest())
    lat = initial
    record_frame(traj, lat, 0)
    for t in range(1, cfg.iterations + 1):
        lat = efg_step(lat, cfg, rng)
        record_frame(traj, lat, t)
    return traj
