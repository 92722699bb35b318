"""Lattice, cells, Moore neighbourhoods, trajectories and the frame text format.

Coordinates are 0-based with the origin at the bottom-left cell; cells are
stored row-major, ``index = y * width + x``.  Cells are immutable, so a
lattice snapshot is just a copy of the cell list.

Frame record layout (rows printed top row first so fixtures look like the
lattice they describe)::

    frame width=3 height=2 game=pd t=0
    DDT
    DTT
    state
    2:0:- 2:0:- 2:0:-
    2:0:- 2:0:- 2:0:-
    end

The ``state`` block holds ``score:age:memory`` per cell (memory ``-`` means
none) and may be omitted, in which case every cell gets ``default_score``,
age 0 and no memory.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional, Union

from .strategies import Action, label_enum

Score = Union[int, float]


class Coord(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True, slots=True)
class Cell:
    strategy: object
    score: Score = 0
    age: int = 0
    memory: Optional[Action] = None


class PreconditionError(ValueError):
    pass


class FrameParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class Lattice:
    width: int
    height: int
    cells: list
    game: str = "pd"

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise PreconditionError(f"lattice dimensions must be positive, got {self.width}x{self.height}")
        if len(self.cells) != self.width * self.height:
            raise PreconditionError(
                f"{self.width}x{self.height} lattice needs {self.width * self.height} cells, got {len(self.cells)}")

    @classmethod
    def from_rows(cls, rows, game: str = "pd", score: Score = 0) -> "Lattice":
        """Build from strategy code strings, top row first (as printed)."""
        enum = label_enum(game)
        rows = list(rows)
        height, width = len(rows), len(rows[0])
        cells = [None] * (width * height)
        for r, line in enumerate(rows):
            if len(line) != width:
                raise PreconditionError(f"row {r} has length {len(line)}, expected {width}")
            y = height - 1 - r
            for x, ch in enumerate(line):
                cells[y * width + x] = Cell(enum(ch), score)
        return cls(width, height, cells, game)

    @classmethod
    def filled(cls, width: int, height: int, strategy, game: str = "pd", score: Score = 0) -> "Lattice":
        return cls(width, height, [Cell(strategy, score)] * (width * height), game)

    def index(self, c) -> int:
        x, y = c
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise PreconditionError(f"coordinate {tuple(c)} outside {self.width}x{self.height} lattice")
        return y * self.width + x

    def coord(self, i: int) -> Coord:
        return Coord(i % self.width, i // self.width)

    def __getitem__(self, c) -> Cell:
        return self.cells[self.index(c)]

    def __setitem__(self, c, cell: Cell):
        self.cells[self.index(c)] = cell

    def copy(self) -> "Lattice":
        return Lattice(self.width, self.height, list(self.cells), self.game)

    def strategy_grid(self) -> list:
        """Rows of strategy codes, top row first."""
        w = self.width
        return ["".join(self.cells[y * w + x].strategy.value for x in range(w))
                for y in range(self.height - 1, -1, -1)]

    def occupancy(self) -> dict:
        counts = {label: 0 for label in label_enum(self.game)}
        for cell in self.cells:
            counts[cell.strategy] += 1
        return counts


@lru_cache(maxsize=64)
def neighbor_table(width: int, height: int) -> tuple:
    """Neighbour cell indices for every cell, in ``neighbors`` order."""
    table = []
    for y in range(height):
        for x in range(width):
            table.append(tuple(c.y * width + c.x for c in neighbors(width, height, Coord(x, y))))
    return tuple(table)


def neighbors(width: int, height: int, c) -> list:
    """Moore neighbourhood of ``c`` clipped at the lattice boundary.

    Offsets are visited row-major from (-1, -1) to (1, 1), skipping (0, 0).
    """
    x, y = c
    if not (0 <= x < width and 0 <= y < height):
        raise PreconditionError(f"coordinate {(x, y)} outside {width}x{height} lattice")
    out = []
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            nx, ny = x + dx, y + dy
            if 0 <= nx < width and 0 <= ny < height:
                out.append(Coord(nx, ny))
    return out


@dataclass
class Trajectory:
    frames: list = field(default_factory=list)
    game: str = "pd"
    seed: Optional[int] = None
    digest: str = ""

    def __len__(self):
        return len(self.frames)

    @property
    def iterations(self) -> list:
        return [t for t, _ in self.frames]

    def frame(self, t: int) -> Lattice:
        for ti, lat in self.frames:
            if ti == t:
                return lat
        raise KeyError(f"no frame recorded at iteration {t}")

    def occupancy_table(self) -> list:
        """(t, {label: count}) for every frame."""
        return [(t, lat.occupancy()) for t, lat in self.frames]


def record_frame(traj: Trajectory, lat: Lattice, t: int) -> Trajectory:
    if traj.frames:
        last_t, first = traj.frames[-1][0], traj.frames[0][1]
        if t <= last_t:
            raise PreconditionError(f"frame index {t} must exceed the last recorded index {last_t}")
        if (lat.width, lat.height) != (first.width, first.height):
            raise PreconditionError("all frames of a trajectory must share the lattice dimensions")
    traj.frames.append((t, lat.copy()))
    return traj


# -- text format ------------------------------------------------------------

def _fmt_score(s) -> str:
    return repr(s) if isinstance(s, float) else str(s)


def serialize_frame(lat: Lattice, t: int = 0, state: bool = True) -> str:
    w, h = lat.width, lat.height
    lines = [f"frame width={w} height={h} game={lat.game} t={t}"]
    lines.extend(lat.strategy_grid())
    if state:
        lines.append("state")
        for y in range(h - 1, -1, -1):
            row = lat.cells[y * w:(y + 1) * w]
            lines.append(" ".join(
                f"{_fmt_score(c.score)}:{c.age}:{c.memory.value if c.memory else '-'}" for c in row))
    lines.append("end")
    return "\n".join(lines) + "\n"


def _parse_score(tok: str, line: int, col: int):
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        raise FrameParseError(f"bad score {tok!r}", line, col) from None


def _parse_header(text: str, line: int) -> dict:
    parts = text.split()
    if not parts or parts[0] != "frame":
        raise FrameParseError(f"expected 'frame' header, got {text!r}", line, 1)
    fields = {}
    for p in parts[1:]:
        key, sep, value = p.partition("=")
        if not sep:
            raise FrameParseError(f"malformed header field {p!r}", line, text.find(p) + 1)
        fields[key] = value
    missing = {"width", "height", "game", "t"} - fields.keys()
    if missing:
        raise FrameParseError(f"header missing {sorted(missing)}", line, 1)
    try:
        return {"width": int(fields["width"]), "height": int(fields["height"]),
                "game": fields["game"], "t": int(fields["t"])}
    except ValueError as exc:
        raise FrameParseError(f"non-integer header value ({exc})", line, 1) from None


def _parse_frame_lines(lines: list, start: int, default_score: Score):
    """Parse one frame beginning at ``lines[start]``; returns (t, lattice, next index)."""
    if start >= len(lines):
        raise FrameParseError("unexpected end of input, expected frame header", start + 1)
    hdr = _parse_header(lines[start], start + 1)
    w, h, game = hdr["width"], hdr["height"], hdr["game"]
    try:
        enum = label_enum(game)
    except ValueError as exc:
        raise FrameParseError(str(exc), start + 1, 1) from None
    codes = {m.value: m for m in enum}
    grid = [[None] * w for _ in range(h)]
    i = start + 1
    for r in range(h):
        if i >= len(lines):
            raise FrameParseError(f"truncated frame: expected {h} strategy rows, got {r}", i + 1)
        row = lines[i]
        if len(row) != w:
            raise FrameParseError(f"row has {len(row)} cells, expected {w}", i + 1, min(len(row), w) + 1)
        for x, ch in enumerate(row):
            if ch not in codes:
                raise FrameParseError(f"unknown {game} strategy code {ch!r}", i + 1, x + 1)
            grid[h - 1 - r][x] = codes[ch]
        i += 1
    state = None
    if i < len(lines) and lines[i] == "state":
        i += 1
        state = [[None] * w for _ in range(h)]
        for r in range(h):
            if i >= len(lines):
                raise FrameParseError(f"truncated state block: expected {h} rows, got {r}", i + 1)
            toks = lines[i].split()
            if len(toks) != w:
                raise FrameParseError(f"state row has {len(toks)} entries, expected {w}", i + 1)
            col = 1
            for x, tok in enumerate(toks):
                parts = tok.split(":")
                if len(parts) != 3:
                    raise FrameParseError(f"state entry {tok!r} is not score:age:memory", i + 1, col)
                score = _parse_score(parts[0], i + 1, col)
                try:
                    age = int(parts[1])
                except ValueError:
                    raise FrameParseError(f"bad age {parts[1]!r}", i + 1, col) from None
                if age < 0:
                    raise FrameParseError("age must be non-negative", i + 1, col)
                if parts[2] == "-":
                    mem = None
                elif parts[2] in ("C", "D"):
                    mem = Action(parts[2])
                else:
                    raise FrameParseError(f"bad memory {parts[2]!r}", i + 1, col)
                state[h - 1 - r][x] = (score, age, mem)
                col += len(tok) + 1
            i += 1
    if i >= len(lines) or lines[i] != "end":
        raise FrameParseError("expected 'end' terminating the frame", min(i, len(lines)) + 1)
    cells = []
    for y in range(h):
        for x in range(w):
            if state is None:
                cells.append(Cell(grid[y][x], default_score))
            else:
                s, a, m = state[y][x]
                cells.append(Cell(grid[y][x], s, a, m))
    return hdr["t"], Lattice(w, h, cells, game), i + 1


def _content_lines(text: str) -> list:
    return [ln.rstrip("\r") for ln in text.split("\n")]


def parse_frame(text: str, default_score: Score = 0) -> Lattice:
    lines = _content_lines(text)
    while lines and lines[-1] == "":
        lines.pop()
    _, lat, nxt = _parse_frame_lines(lines, 0, default_score)
    if nxt != len(lines):
        raise FrameParseError("trailing content after frame", nxt + 1)
    return lat


def parse_frame_with_t(text: str, default_score: Score = 0):
    lines = _content_lines(text)
    t, lat, _ = _parse_frame_lines(lines, 0, default_score)
    return t, lat


def serialize_trajectory(traj: Trajectory, state: bool = True) -> str:
    meta = [f"game={traj.game}"]
    if traj.seed is not None:
        meta.append(f"seed={traj.seed}")
    if traj.digest:
        meta.append(f"digest={traj.digest}")
    out = ["# trajectory " + " ".join(meta) + "\n"]
    out.extend(serialize_frame(lat, t, state) for t, lat in traj.frames)
    return "".join(out)


def parse_trajectory(text: str, default_score: Score = 0) -> Trajectory:
    lines = _content_lines(text)
    traj = Trajectory()
    i = 0
    while i < len(lines):
        ln = lines[i]
        if ln.strip() == "":
            i += 1
            continue
        if ln.startswith("#"):
            if ln.startswith("# trajectory"):
                for p in ln.split()[2:]:
                    key, _, value = p.partition("=")
                    if key == "game":
                        traj.game = value
                    elif key == "seed":
                        traj.seed = int(value)
                    elif key == "digest":
                        traj.digest = value
            i += 1
            continue
        t, lat, i = _parse_frame_lines(lines, i, default_score)
        try:
            record_frame(traj, lat, t)
        except PreconditionError as exc:
            raise FrameParseError(str(exc), i) from None
        traj.game = lat.game
    if not traj.frames:
        raise FrameParseError("no frames found", 1)
    return traj
