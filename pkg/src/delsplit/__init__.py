"""Solvers, verification harness and play service for delete-and-split nim.

Seven rulesets over heaps of tokens, all normal play (last mover wins),
all with a fixed heap count: each move deletes some heaps whole and
splits some of the survivors.  Every family here has an exact closed-form
outcome test and an explicit winning-move construction; an exhaustive
memoized game-tree oracle cross-checks both over finite regions.

Quick start::

    >>> from delsplit import parse_ruleset, canonicalize, classify, winning_move
    >>> rs = parse_ruleset("abo:3")
    >>> p = canonicalize(rs, [9, 1, 1])
    >>> str(classify(rs, p).pn)
    'N'
    >>> winning_move(rs, p).result.heaps
    (1, 1, 7)
"""

from .classifier import (
    classify,
    classify_heaps,
    delete_nim_grundy,
    is_p_position,
)
from .core import (
    ABO,
    DeleteNim,
    GameError,
    Half,
    IllegalHeapSize,
    IllegalMove,
    InternalContradiction,
    KFrac,
    MoveRecord,
    NMTH,
    Outcome,
    PN,
    Position,
    RULESET_FAMILIES,
    Ruleset,
    RulesetCodeError,
    Single,
    Unsupported,
    VDN,
    WrongArity,
    canonicalize,
    is_terminal,
    parse_ruleset,
)
from .numtheory import DomainError
from .oracle import (
    LimitExceeded,
    MemoTable,
    Oracle,
    SweepReport,
    SweepRow,
    iter_region,
    region_oracle,
    strategy_violations,
    sweep,
)
from .strategy import (
    MoveChoice,
    apply_move,
    legal_moves,
    successors,
    winning_move,
)

__version__ = "0.1.0"

__all__ = [
    "ABO",
    "DeleteNim",
    "DomainError",
    "GameError",
    "Half",
    "IllegalHeapSize",
    "IllegalMove",
    "InternalContradiction",
    "KFrac",
    "LimitExceeded",
    "MemoTable",
    "MoveChoice",
    "MoveRecord",
    "NMTH",
    "Oracle",
    "Outcome",
    "PN",
    "Position",
    "RULESET_FAMILIES",
    "Ruleset",
    "RulesetCodeError",
    "Single",
    "SweepReport",
    "SweepRow",
    "Unsupported",
    "VDN",
    "WrongArity",
    "__version__",
    "apply_move",
    "canonicalize",
    "classify",
    "classify_heaps",
    "delete_nim_grundy",
    "is_p_position",
    "is_terminal",
    "iter_region",
    "legal_moves",
    "parse_ruleset",
    "region_oracle",
    "strategy_violations",
    "successors",
    "sweep",
    "winning_move",
]
