import pytest
from hypothesis import given, strategies as st

from gameshape.lattice import (Cell, Coord, FrameParseError, Lattice, PreconditionError, Trajectory,
                               neighbors, parse_frame, parse_trajectory, record_frame, serialize_frame,
                               serialize_trajectory)
from gameshape.presets import case2_rows, load_fixture_frame, CASE2_CLUSTERS
from gameshape.strategies import Action, EfgState, PdStrategy


@pytest.mark.parametrize("c, n", [((5, 5), 8), ((0, 5), 5), ((0, 0), 3), ((9, 9), 3), ((9, 4), 5)])
def test_neighbor_counts(c, n):
    assert len(neighbors(10, 10, c)) == n


def test_neighbors_degenerate_and_order():
    assert neighbors(1, 1, (0, 0)) == []
    assert neighbors(3, 3, (1, 1)) == [Coord(0, 0), Coord(1, 0), Coord(2, 0), Coord(0, 1),
                                       Coord(2, 1), Coord(0, 2), Coord(1, 2), Coord(2, 2)]


def test_neighbors_out_of_bounds():
    with pytest.raises(PreconditionError):
        neighbors(10, 10, (10, 0))


@given(st.integers(2, 9), st.integers(2, 9), st.data())
def test_neighbor_count_property(w, h, data):
    x = data.draw(st.integers(0, w - 1))
    y = data.draw(st.integers(0, h - 1))
    border = (x in (0, w - 1)) + (y in (0, h - 1))
    assert len(neighbors(w, h, (x, y))) == {0: 8, 1: 5, 2: 3}[border]


def test_record_frame_snapshots():
    lat = Lattice.filled(2, 2, PdStrategy.DEFECTOR)
    traj = record_frame(Trajectory(), lat, 0)
    assert len(traj) == 1
    lat[(0, 0)] = Cell(PdStrategy.COOPERATOR)
    assert traj.frame(0)[(0, 0)].strategy is PdStrategy.DEFECTOR


def test_record_frame_monotone():
    lat = Lattice.filled(2, 2, PdStrategy.DEFECTOR)
    traj = record_frame(Trajectory(), lat, 5)
    with pytest.raises(PreconditionError):
        record_frame(traj, lat, 3)
    with pytest.raises(PreconditionError):
        record_frame(traj, Lattice.filled(3, 2, PdStrategy.DEFECTOR), 6)


def test_round_trip_all_defector():
    lat = Lattice.filled(2, 2, PdStrategy.DEFECTOR, score=2)
    assert parse_frame(serialize_frame(lat)) == lat


def test_case2_fixture_matches_layout():
    lat = load_fixture_frame("case2_initial")
    assert lat.strategy_grid() == case2_rows()
    tft = {tuple(lat.coord(i)) for i, c in enumerate(lat.cells) if c.strategy is PdStrategy.TIT_FOR_TAT}
    assert tft == set(CASE2_CLUSTERS)


def test_truncated_record():
    text = serialize_frame(Lattice.filled(3, 3, PdStrategy.DEFECTOR))
    with pytest.raises(FrameParseError):
        parse_frame("\n".join(text.splitlines()[:2]))


def test_bad_code_reports_position():
    with pytest.raises(FrameParseError) as err:
        parse_frame("frame width=2 height=1 game=pd t=0\nDX\n")
    assert err.value.line == 2


pd_cells = st.builds(Cell, st.sampled_from(list(PdStrategy)),
                     st.one_of(st.integers(-20, 4), st.sampled_from([0.5, -1.25, 3.75])),
                     st.integers(0, 100), st.sampled_from([None, Action.COOPERATE, Action.DEFECT]))


@st.composite
def pd_lattices(draw):
    w, h = draw(st.integers(1, 6)), draw(st.integers(1, 6))
    return Lattice(w, h, draw(st.lists(pd_cells, min_size=w * h, max_size=w * h)), "pd")


@given(pd_lattices(), st.integers(0, 10_000))
def test_round_trip_property(lat, t):
    assert parse_frame(serialize_frame(lat, t)) == lat


@given(st.lists(pd_lattices(), min_size=1, max_size=4))
def test_trajectory_round_trip(lats):
    w, h = lats[0].width, lats[0].height
    traj = Trajectory(game="pd")
    for t, lat in enumerate(lats):
        if (lat.width, lat.height) == (w, h):
            record_frame(traj, lat, 2 * t)
    back = parse_trajectory(serialize_trajectory(traj))
    assert back.frames == traj.frames


def test_efg_round_trip():
    lat = Lattice.from_rows(["EFG", "GGF"], "efg")
    assert parse_frame(serialize_frame(lat)) == lat
    assert lat[(0, 1)].strategy is EfgState.EARTH
