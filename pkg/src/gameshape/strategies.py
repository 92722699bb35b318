"""Strategy labels for both games and the PD action alphabet.

Every label carries a single-character code used by the frame text format.
"""
from enum import Enum


class Action(str, Enum):
    COOPERATE = "C"
    DEFECT = "D"

    def opposite(self) -> "Action":
        return Action.DEFECT if self is Action.COOPERATE else Action.COOPERATE


class PdStrategy(str, Enum):
    DEFECTOR = "D"
    COOPERATOR = "C"
    TIT_FOR_TAT = "T"
    ANTI_TIT_FOR_TAT = "A"


class EfgState(str, Enum):
    EARTH = "E"
    FIRE = "F"
    GRASS = "G"


GAME_LABELS = {"pd": PdStrategy, "efg": EfgState}

# names accepted on the command line, in addition to the one-letter codes
_ALIASES = {
    "defector": PdStrategy.DEFECTOR,
    "cooperator": PdStrategy.COOPERATOR,
    "tft": PdStrategy.TIT_FOR_TAT,
    "titfortat": PdStrategy.TIT_FOR_TAT,
    "atft": PdStrategy.ANTI_TIT_FOR_TAT,
    "antititfortat": PdStrategy.ANTI_TIT_FOR_TAT,
    "earth": EfgState.EARTH,
    "fire": EfgState.FIRE,
    "grass": EfgState.GRASS,
}


def label_enum(game: str):
    try:
        return GAME_LABELS[game]
    except KeyError:
        raise ValueError(f"unknown game kind {game!r}; expected one of {sorted(GAME_LABELS)}") from None


def parse_label(game: str, text: str):
    """Resolve a strategy given as a code ('D'), enum name or common alias ('tft')."""
    enum = label_enum(game)
    key = text.strip()
    for member in enum:
        if key == member.value or key.upper() == member.name:
            return member
    alias = _ALIASES.get(key.lower().replace("-", "").replace("_", ""))
    if alias is not None and isinstance(alias, enum):
        return alias
    valid = ", ".join(f"{m.value} ({m.name.lower()})" for m in enum)
    raise ValueError(f"unknown {game} strategy {text!r}; valid labels: {valid}")
