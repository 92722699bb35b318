"""Four-strategy stochastic Prisoner's Dilemma on a clipped Moore lattice.

One iteration is an interaction phase followed by a lifecycle phase.

Random stream (a single ``random.Random`` seeded with ``PdConfig.seed``),
consumed per iteration in this order:

1. interaction: one ``shuffle`` of all cell indices (initiation order), then
   for each initiator with at least one neighbour, one ``randrange`` picking
   its partner;
2. lifecycle, cells in row-major order: an age draw (``random()``) for a cell
   that survived the score check when its death probability is strictly
   between 0 and 1; for a dead cell, a mutation draw when ``0 < mu < 1``,
   then one ``randrange`` choosing the new strategy or the neighbour copied.
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import asdict, dataclass
from typing import Optional

from .lattice import Cell, Lattice, PreconditionError, Trajectory, neighbor_table, record_frame
from .strategies import Action, PdStrategy

STRATEGIES = tuple(PdStrategy)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PdConfig:
    T: float = 2
    R: float = 1
    P: float = 0
    S: float = -1
    SS: float = 2
    MS: float = 4
    mu: float = 0.0
    zeta: Optional[float] = None  # None disables death by age
    Q: int = 4
    width: int = 10
    height: int = 10
    seed: int = 0

    def __post_init__(self):
        if not (self.T > self.R > self.P > self.S):
            raise ConfigError(f"payoffs must satisfy T > R > P > S, got {self.T}, {self.R}, {self.P}, {self.S}")
        if not 0 <= self.mu <= 1:
            raise ConfigError(f"mu must lie in [0, 1], got {self.mu}")
        if self.zeta is not None and not self.zeta > 0:
            raise ConfigError(f"zeta must be positive, got {self.zeta}")
        if not 1 <= self.Q <= len(STRATEGIES):
            raise ConfigError(f"Q must be between 1 and {len(STRATEGIES)}, got {self.Q}")
        if self.SS > self.MS:
            raise ConfigError(f"starting score {self.SS} exceeds maximum score {self.MS}")
        if self.width < 1 or self.height < 1:
            raise ConfigError("lattice dimensions must be positive")

    @property
    def mutation_pool(self) -> tuple:
        return STRATEGIES[:self.Q]

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def payoff(a: Action, b: Action, cfg: PdConfig) -> tuple:
    """Score deltas for (first, second) player."""
    if a is Action.COOPERATE:
        return (cfg.R, cfg.R) if b is Action.COOPERATE else (cfg.S, cfg.T)
    return (cfg.T, cfg.S) if b is Action.COOPERATE else (cfg.P, cfg.P)


def choose_action(cell: Cell) -> Action:
    s, mem = cell.strategy, cell.memory
    if s is PdStrategy.DEFECTOR:
        return Action.DEFECT
    if s is PdStrategy.COOPERATOR:
        return Action.COOPERATE
    if s is PdStrategy.TIT_FOR_TAT:
        return Action.COOPERATE if mem is None else mem
    if s is PdStrategy.ANTI_TIT_FOR_TAT:
        return Action.DEFECT if mem is None else mem.opposite()
    raise ValueError(f"not a PD strategy: {s!r}")


def play_game(a: Cell, b: Cell, cfg: PdConfig) -> tuple:
    """One game; returns the updated pair with capped scores and new memories."""
    act_a, act_b = choose_action(a), choose_action(b)
    da, db = payoff(act_a, act_b, cfg)
    return (Cell(a.strategy, min(a.score + da, cfg.MS), a.age, act_b),
            Cell(b.strategy, min(b.score + db, cfg.MS), b.age, act_a))


def _check(lat: Lattice, cfg: PdConfig):
    if (lat.width, lat.height) != (cfg.width, cfg.height):
        raise ConfigError(f"lattice is {lat.width}x{lat.height} but config says {cfg.width}x{cfg.height}")


def interaction_phase(lat: Lattice, cfg: PdConfig, rng: random.Random) -> Lattice:
    """Every cell initiates one game with a uniformly drawn neighbour.

    Initiators go in a seeded random order and payoffs apply immediately, so
    a cell may take part in several games as the selected partner.
    """
    table = neighbor_table(lat.width, lat.height)
    cells = list(lat.cells)
    order = list(range(len(cells)))
    rng.shuffle(order)
    for i in order:
        nbrs = table[i]
        if not nbrs:
            continue
        j = nbrs[rng.randrange(len(nbrs))]
        cells[i], cells[j] = play_game(cells[i], cells[j], cfg)
    return Lattice(lat.width, lat.height, cells, lat.game)


def death_probability(age: int, zeta: Optional[float]) -> float:
    """Chance of dying of old age, ``clamp(age / zeta - 1, 0, 1)``."""
    if zeta is None:
        return 0.0
    if not zeta > 0:
        raise ConfigError(f"zeta must be positive, got {zeta}")
    if age < 0:
        raise PreconditionError("age must be non-negative")
    return min(1.0, max(0.0, (age - zeta) / zeta))


def _bernoulli(p: float, rng: random.Random) -> bool:
    if p <= 0:
        return False
    if p >= 1:
        return True
    return rng.random() < p


def dies(cell: Cell, cfg: PdConfig, rng: random.Random) -> bool:
    """Score death first; a cell that survives it takes the age draw."""
    return cell.score <= 0 or _bernoulli(death_probability(cell.age, cfg.zeta), rng)


def reborn(neighbor_cells, cfg: PdConfig, rng: random.Random) -> Cell:
    """Replacement for a dead cell: a mutant with score SS, or a copy of a neighbour."""
    if not neighbor_cells or _bernoulli(cfg.mu, rng):
        pool = cfg.mutation_pool
        return Cell(pool[rng.randrange(len(pool))], cfg.SS, 0, None)
    parent = neighbor_cells[rng.randrange(len(neighbor_cells))]
    return Cell(parent.strategy, parent.score, 0, None)


def lifecycle_cell(cell: Cell, neighbor_cells, cfg: PdConfig, rng: random.Random) -> Cell:
    if dies(cell, cfg, rng):
        return reborn(neighbor_cells, cfg, rng)
    return Cell(cell.strategy, cell.score, cell.age + 1, cell.memory)


def lifecycle_phase(lat: Lattice, cfg: PdConfig, rng: random.Random) -> Lattice:
    """Synchronous sweep: every decision reads the pre-phase lattice."""
    table = neighbor_table(lat.width, lat.height)
    old = lat.cells
    cells = [lifecycle_cell(old[i], [old[j] for j in table[i]], cfg, rng) for i in range(len(old))]
    return Lattice(lat.width, lat.height, cells, lat.game)


def step(lat: Lattice, cfg: PdConfig, rng: random.Random) -> Lattice:
    return lifecycle_phase(interaction_phase(lat, cfg, rng), cfg, rng)


def initial_lattice(rows, cfg: PdConfig) -> Lattice:
    """Lattice from strategy code rows (top first) with every score at SS."""
    lat = Lattice.from_rows(rows, "pd", cfg.SS)
    _check(lat, cfg)
    return lat


def pd_run(cfg: PdConfig, initial: Lattice, iterations: int) -> Trajectory:
    _check(initial, cfg)
    if iterations < 0:
        raise ConfigError("iterations must be non-negative")
    rng = random.Random(cfg.seed)
    traj = Trajectory(game="pd", seed=cfg.seed, digest=cfg.digest())
    lat = initial
    record_frame(traj, lat, 0)
    for t in range(1, iterations + 1):
        lat = step(lat, cfg, rng)
        record_frame(traj, lat, t)
    return traj


# -- single-cell Markov transition ------------------------------------------

def lethal_neighbors(lat: Lattice, c, cfg: PdConfig) -> int:
    """Neighbours whose game against the focal cell would leave it with score <= 0.

    Actions are the deterministic choices both cells would make from their
    current memories.
    """
    i = lat.index(c)
    focal = lat.cells[i]
    mine = choose_action(focal)
    count = 0
    for j in neighbor_table(lat.width, lat.height)[i]:
        delta, _ = payoff(mine, choose_action(lat.cells[j]), cfg)
        if min(focal.score + delta, cfg.MS) <= 0:
            count += 1
    return count


def _clamp01(v: float) -> float:
    return min(1.0, max(0.0, v))


def transition_probability(lat: Lattice, c, target, cfg: PdConfig) -> float:
    """Probability that the focal cell dies and is replaced by ``target``.

    ``(X + Y - XY) * (mu/Q + (1 - mu) * |target| / |N|)`` with X the share of
    lethal neighbours and Y the age-death probability.
    """
    i = lat.index(c)
    nbrs = neighbor_table(lat.width, lat.height)[i]
    focal = lat.cells[i]
    y = _clamp01(death_probability(focal.age, cfg.zeta))
    if nbrs:
        x = _clamp01(lethal_neighbors(lat, c, cfg) / len(nbrs))
    else:
        x = 1.0 if focal.score <= 0 else 0.0
    dies = x + y - x * y
    z = cfg.mu / cfg.Q if target in cfg.mutation_pool else 0.0
    if nbrs:
        same = sum(1 for j in nbrs if lat.cells[j].strategy is target)
        r = (1 - cfg.mu) * same / len(nbrs)
    else:
        # an isolated cell can only be reborn through mutation
        z = 1 / cfg.Q if target in cfg.mutation_pool else 0.0
        r = 0.0
    return dies * _clamp01(z + r)


def transition_distribution(lat: Lattice, c, cfg: PdConfig) -> dict:
    """Outcome distribution of the focal cell: ``None`` means it survives."""
    out = {s: transition_probability(lat, c, s, cfg) for s in STRATEGIES}
    out[None] = 1.0 - sum(out.values())
    return out


def focal_trial(lat: Lattice, c, cfg: PdConfig, rng: random.Random):
    """One realisation of the focal cell's own game followed by its lifecycle.

    Returns ``None`` if it survives, else the strategy it is reborn as.  This
    is the sampling counterpart of :func:`transition_probability`.
    """
    i = lat.index(c)
    nbrs = neighbor_table(lat.width, lat.height)[i]
    focal = lat.cells[i]
    neighbor_cells = [lat.cells[j] for j in nbrs]
    if nbrs:
        k = rng.randrange(len(nbrs))
        focal, partner = play_game(focal, neighbor_cells[k], cfg)
        neighbor_cells[k] = partner
    if dies(focal, cfg, rng):
        return reborn(neighbor_cells, cfg, rng).strategy
    return None
