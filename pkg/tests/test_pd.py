import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from gameshape.lattice import Cell, Lattice, PreconditionError
from gameshape.pd import (ConfigError, PdConfig, choose_action, death_probability, focal_trial,
                          initial_lattice, interaction_phase, lethal_neighbors, lifecycle_cell,
                          lifecycle_phase, payoff, pd_run, transition_distribution,
                          transition_probability)
from gameshape.lattice import serialize_trajectory
from gameshape.strategies import Action, PdStrategy

D, C, T, A = PdStrategy
COOP, DEF = Action.COOPERATE, Action.DEFECT


def test_payoff_examples():
    cfg = PdConfig()
    assert payoff(COOP, COOP, cfg) == (1, 1)
    assert payoff(DEF, COOP, cfg) == (2, -1)
    assert payoff(COOP, DEF, cfg) == (-1, 2)
    assert payoff(DEF, DEF, cfg) == (0, 0)


@given(st.sampled_from(list(Action)), st.sampled_from(list(Action)))
def test_payoff_symmetry(a, b):
    cfg = PdConfig()
    x, y = payoff(a, b, cfg)
    assert payoff(b, a, cfg) == (y, x)


def test_config_validation():
    with pytest.raises(ConfigError):
        PdConfig(T=1, R=2)
    with pytest.raises(ConfigError):
        PdConfig(mu=1.5)
    with pytest.raises(ConfigError):
        PdConfig(zeta=0)
    with pytest.raises(ConfigError):
        PdConfig(SS=5, MS=4)


def test_choose_action():
    assert choose_action(Cell(T)) is COOP
    assert choose_action(Cell(T, memory=DEF)) is DEF
    assert choose_action(Cell(A, memory=COOP)) is DEF
    assert choose_action(Cell(A)) is DEF
    assert choose_action(Cell(A, memory=DEF)) is COOP
    for mem in (None, COOP, DEF):
        assert choose_action(Cell(D, memory=mem)) is DEF
        assert choose_action(Cell(C, memory=mem)) is COOP


def test_two_cell_lattice_both_initiate():
    # each cell initiates one game, so the pair plays twice per phase
    cfg = PdConfig(width=2, height=1)
    lat = initial_lattice(["DC"], cfg)
    for seed in range(5):
        out = interaction_phase(lat, cfg, random.Random(seed))
        assert out[(0, 0)].score == min(2 + 2 * 2, 4)
        assert out[(1, 0)].score == 2 - 2
        assert out[(0, 0)].memory is COOP and out[(1, 0)].memory is DEF


def test_all_cooperators_gain_one_per_game():
    cfg = PdConfig(width=3, height=3)
    lat = initial_lattice(["CCC"] * 3, cfg)
    for seed in range(10):
        rng = random.Random(seed)
        # replay the pairing draws to count games per cell
        probe = random.Random(seed)
        order = list(range(9))
        probe.shuffle(order)
        games = [0] * 9
        from gameshape.lattice import neighbor_table
        table = neighbor_table(3, 3)
        for i in order:
            j = table[i][probe.randrange(len(table[i]))]
            games[i] += 1
            games[j] += 1
        out = interaction_phase(lat, cfg, rng)
        assert [c.score for c in out.cells] == [min(2 + k, 4) for k in games]


def test_all_defectors_unchanged():
    cfg = PdConfig(width=4, height=4)
    lat = initial_lattice(["DDDD"] * 4, cfg)
    out = interaction_phase(lat, cfg, random.Random(3))
    assert [c.score for c in out.cells] == [2] * 16


@settings(max_examples=40)
@given(st.integers(0, 10_000), st.lists(st.sampled_from("DCTA"), min_size=16, max_size=16))
def test_score_cap_after_interaction(seed, codes):
    cfg = PdConfig(width=4, height=4)
    lat = initial_lattice(["".join(codes[r * 4:(r + 1) * 4]) for r in range(4)], cfg)
    rng = random.Random(seed)
    for _ in range(5):
        lat = interaction_phase(lat, cfg, rng)
        assert max(c.score for c in lat.cells) <= cfg.MS
        assert all(c.memory is not None for c in lat.cells)
        lat = lifecycle_phase(lat, cfg, rng)


def test_death_probability():
    assert death_probability(15, 10) == 0.5
    assert death_probability(19, 10) == pytest.approx(0.9, abs=1e-15)
    assert death_probability(5, 10) == 0.0
    assert death_probability(25, 10) == 1.0
    assert death_probability(1000, None) == 0.0
    with pytest.raises(ConfigError):
        death_probability(3, 0)
    with pytest.raises(ConfigError):
        death_probability(3, -2)
    with pytest.raises(PreconditionError):
        death_probability(-1, 10)


def test_lifecycle_forced_rebirth():
    cfg = PdConfig(mu=0)
    nbrs = [Cell(C, 3, 7, COOP)] * 8
    out = lifecycle_cell(Cell(D, 0, 4, COOP), nbrs, cfg, random.Random(0))
    assert out == Cell(C, 3, 0, None)


def test_lifecycle_survivor_ages():
    cfg = PdConfig(mu=0.3, zeta=20)
    cell = Cell(T, 3, 0, DEF)
    assert lifecycle_cell(cell, [Cell(D)] * 3, cfg, random.Random(1)) == Cell(T, 3, 1, DEF)


def test_mutation_frequencies():
    cfg = PdConfig(mu=1)
    rng = random.Random(11)
    n = 20_000
    counts = {s: 0 for s in PdStrategy}
    for _ in range(n):
        out = lifecycle_cell(Cell(D, 0), [Cell(C, 3)] * 8, cfg, rng)
        assert out.score == cfg.SS and out.age == 0
        counts[out.strategy] += 1
    sigma = math.sqrt(n * 0.25 * 0.75)
    for k in counts.values():
        assert abs(k - n / 4) <= 3 * sigma


def test_lifecycle_is_synchronous():
    # the dead centre copies its neighbours' pre-phase state
    cfg = PdConfig(width=3, height=1, mu=0)
    lat = Lattice(3, 1, [Cell(C, 0), Cell(D, 0), Cell(C, 0)])
    out = lifecycle_phase(lat, cfg, random.Random(0))
    assert out[(1, 0)].strategy is C
    assert {out[(0, 0)].strategy, out[(2, 0)].strategy} == {D}


def test_transition_all_lethal_is_certain():
    cfg = PdConfig(mu=0, width=3, height=3)
    lat = Lattice(3, 3, [Cell(C, 3)] * 9)
    lat[(1, 1)] = Cell(C, 1)          # C vs D loses 1 -> 0, so every defector is lethal
    for x in range(3):
        for y in range(3):
            if (x, y) != (1, 1):
                lat[(x, y)] = Cell(D, 3)
    assert lethal_neighbors(lat, (1, 1), cfg) == 8
    assert transition_probability(lat, (1, 1), D, cfg) == 1.0
    assert transition_probability(lat, (1, 1), C, cfg) == 0.0


def test_transition_no_death():
    cfg = PdConfig(mu=0, width=3, height=3)
    lat = Lattice(3, 3, [Cell(D, 3)] * 9)
    for s in PdStrategy:
        assert transition_probability(lat, (1, 1), s, cfg) == 0.0


def _example_lattice():
    # interior focal with |K| = 2, age 10, |ATFT neighbours| = 3
    cfg = PdConfig(mu=0.05, zeta=20, width=3, height=3)
    lat = Lattice(3, 3, [Cell(C, 4, 0, COOP)] * 9)
    lat[(1, 1)] = Cell(C, 1, 10, COOP)
    lat[(0, 0)] = Cell(D, 2)
    lat[(1, 0)] = Cell(D, 2)
    for c in ((2, 0), (0, 1), (2, 1)):
        lat[c] = Cell(A, 2, 0, COOP)     # ATFT answers a cooperator with defection: lethal too
    return cfg, lat


def test_transition_formula_value():
    cfg, lat = _example_lattice()
    lat[(2, 0)] = Cell(A, 2, 0, DEF)     # now cooperates back: not lethal
    lat[(0, 1)] = Cell(A, 2, 0, DEF)
    lat[(2, 1)] = Cell(A, 2, 0, DEF)
    assert lethal_neighbors(lat, (1, 1), cfg) == 2
    x, y = 2 / 8, 0.0
    expected = (x + y - x * y) * (0.05 / 4 + 0.95 * 3 / 8)
    assert transition_probability(lat, (1, 1), A, cfg) == pytest.approx(expected, abs=1e-15)
    lat[(1, 1)] = Cell(C, 1, 25, COOP)   # age 25 with zeta 20 -> Y = 0.25
    y = 0.25
    expected = (x + y - x * y) * (0.05 / 4 + 0.95 * 3 / 8)
    assert transition_probability(lat, (1, 1), A, cfg) == pytest.approx(expected, abs=1e-15)


def test_transition_matches_monte_carlo():
    cfg, lat = _example_lattice()
    lat[(1, 1)] = Cell(C, 1, 25, COOP)
    dist = transition_distribution(lat, (1, 1), cfg)
    rng = random.Random(5)
    n = 100_000
    counts = {k: 0 for k in dist}
    for _ in range(n):
        counts[focal_trial(lat, (1, 1), cfg, rng)] += 1
    for k, p in dist.items():
        assert abs(counts[k] - n * p) <= 3 * math.sqrt(n * p * (1 - p)) + 1e-9


@st.composite
def frozen_states(draw):
    w, h = draw(st.integers(1, 4)), draw(st.integers(1, 4))
    cells = draw(st.lists(st.builds(Cell, st.sampled_from(list(PdStrategy)), st.integers(-2, 4),
                                    st.integers(0, 40), st.sampled_from([None, COOP, DEF])),
                          min_size=w * h, max_size=w * h))
    c = (draw(st.integers(0, w - 1)), draw(st.integers(0, h - 1)))
    cfg = PdConfig(mu=draw(st.sampled_from([0, 0.05, 0.5, 1])), zeta=draw(st.sampled_from([None, 10, 20])),
                   Q=draw(st.integers(1, 4)), width=w, height=h)
    return Lattice(w, h, cells), c, cfg


@given(frozen_states())
def test_distribution_is_stochastic(state):
    lat, c, cfg = state
    dist = transition_distribution(lat, c, cfg)
    assert all(-1e-12 <= p <= 1 + 1e-12 for p in dist.values())
    assert abs(sum(dist.values()) - 1) <= 1e-12


def test_run_lengths_and_determinism():
    cfg = PdConfig(width=5, height=5, mu=0.05, zeta=20, seed=9)
    lat = initial_lattice(["DCTAD", "CTADC", "TADCT", "ADCTA", "DCTAD"], cfg)
    assert len(pd_run(cfg, lat, 0)) == 1
    a, b = pd_run(cfg, lat, 25), pd_run(cfg, lat, 25)
    assert len(a) == 26
    assert serialize_trajectory(a) == serialize_trajectory(b)
    with pytest.raises(ConfigError):
        pd_run(PdConfig(width=4, height=5), lat, 3)
