import random

import pytest

from gameshape.efg import EfgConfig, center_fires, efg_run, efg_step
from gameshape.lattice import Cell, Lattice, neighbor_table
from gameshape.pd import ConfigError
from gameshape.strategies import EfgState

E, F, G = EfgState.EARTH, EfgState.FIRE, EfgState.GRASS
LEGAL = {(F, F), (F, E), (E, E), (E, G), (G, G), (G, F)}


def test_old_fire_becomes_earth():
    cfg = EfgConfig(MA=2, width=3, height=1)
    lat = Lattice(3, 1, [Cell(E, 0, 0), Cell(F, 0, 1), Cell(E, 0, 0)], "efg")
    out = efg_step(lat, cfg, random.Random(0))
    assert out[(1, 0)] == Cell(E, 0, 0)


def test_lone_fire_ignites_one_neighbour():
    cfg = EfgConfig(MA=3, width=3, height=3)
    for seed in range(20):
        lat = Lattice.filled(3, 3, G, "efg")
        lat[(1, 1)] = Cell(F)
        out = efg_step(lat, cfg, random.Random(seed))
        assert sum(c.strategy is F for c in out.cells) == 2
        assert out[(1, 1)] == Cell(F, 0, 1)


def test_unique_grass_always_ignites():
    cfg = EfgConfig(MA=3, width=3, height=1)
    lat = Lattice(3, 1, [Cell(F), Cell(G), Cell(F)], "efg")
    for seed in range(10):
        assert efg_step(lat, cfg, random.Random(seed))[(1, 0)] == Cell(F, 0, 0)


def test_earth_regrows_after_ma():
    cfg = EfgConfig(MA=2, width=1, height=1)
    lat = Lattice(1, 1, [Cell(E)], "efg")
    rng = random.Random(0)
    lat = efg_step(lat, cfg, rng)
    assert lat.cells[0] == Cell(E, 0, 1)
    assert efg_step(lat, cfg, rng).cells[0] == Cell(G, 0, 0)


def test_all_grass_absorbing():
    cfg = EfgConfig(width=5, height=4, iterations=10)
    traj = efg_run(cfg, Lattice.filled(5, 4, G, "efg"))
    assert all(lat == traj.frames[0][1] for _, lat in traj.frames)


@pytest.mark.parametrize("ma", [1, 2, 3, 4])
def test_legal_transitions_and_occupancy(ma):
    cfg = EfgConfig(MA=ma, seed=ma, iterations=20)
    traj = efg_run(cfg, center_fires(cfg))
    table = neighbor_table(cfg.width, cfg.height)
    for (_, a), (_, b) in zip(traj.frames, traj.frames[1:]):
        assert sum(b.occupancy().values()) == cfg.width * cfg.height
        for i, (x, y) in enumerate(zip(a.cells, b.cells)):
            assert (x.strategy, y.strategy) in LEGAL
            if x.strategy is G and y.strategy is F:
                assert any(a.cells[j].strategy is F for j in table[i])


def test_zero_steps_and_mismatch():
    cfg = EfgConfig(iterations=0)
    assert len(efg_run(cfg, center_fires(cfg))) == 1
    with pytest.raises(ConfigError):
        efg_run(EfgConfig(width=5), center_fires(cfg))
    with pytest.raises(ConfigError):
        EfgConfig(MA=0)


def test_ensemble_lifetimes():
    alive2 = cleared4 = 0
    for seed in range(50):
        cfg2 = EfgConfig(MA=2, seed=seed)
        traj = efg_run(cfg2, center_fires(cfg2))
        alive2 += traj.frame(16).occupancy()[F] > 0
        cfg4 = EfgConfig(MA=4, seed=seed)
        traj = efg_run(cfg4, center_fires(cfg4))
        cleared4 += any(lat.occupancy()[G] == 144 for t, lat in traj.frames if t < 20)
    assert alive2 >= 40
    assert cleared4 >= 40
