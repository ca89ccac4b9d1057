"""Edge label inventory.

Labels mark the role a child unit plays inside its parent unit.  The
declaration order below doubles as the priority used when picking the
head child of a unit (earlier is more head-like), so don't reorder.
"""

import enum


class Label(enum.Enum):
    CENTER = "C"
    CONNECTOR = "N"
    PARALLEL_SCENE = "H"
    PROCESS = "P"
    STATE = "S"
    PARTICIPANT = "A"
    ADVERBIAL = "D"
    TIME = "T"
    ELABORATOR = "E"
    RELATOR = "R"
    FUNCTION = "F"
    LINKER = "L"
    LINK_RELATION = "LR"
    LINK_ARGUMENT = "LA"
    GROUND = "G"
    TERMINAL = "Terminal"
    PUNCTUATION = "U"

    def __str__(self) -> str:
        return self.value


# Priority rank for head selection: lower rank wins.
HEAD_PRIORITY = {label: rank for rank, label in enumerate(Label)}

# Labels the parser may predict on Node/Edge/Remote transitions.  Terminal
# edges are implied by Shift and never predicted; LR and LA only occur in
# an alternative annotation layer that the parser does not produce.
PARSE_LABELS = tuple(
    label for label in Label
    if label not in (Label.TERMINAL, Label.LINK_RELATION, Label.LINK_ARGUMENT)
)

_BY_VALUE = {label.value: label for label in Label}


def label_from_string(text: str) -> Label:
    try:
        return _BY_VALUE[text]
    except KeyError:
        raise ValueError(f"unknown edge label: {text!r}") from None
