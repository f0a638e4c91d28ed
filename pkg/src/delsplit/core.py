"""Positions, rulesets, moves and outcomes for delete-and-split nim games.

Every game here is an impartial game played on a fixed number of token
heaps.  A move deletes some heaps outright and splits some of the kept
heaps, so the heap count is an invariant of each ruleset.  Normal play:
whoever cannot move loses.

Supported rule families:

* ``DeleteNim``    -- two heaps, zeros allowed.  Select a non-empty heap,
  delete the other, remove one token from the selected heap and split the
  remainder into two (possibly empty) heaps.  Terminal: both heaps empty.
* ``VDN``          -- two heaps of at least 1.  Delete one heap, split the
  other into two non-empty heaps.  Terminal: <1,1>.
* ``ABO(n)``       -- "all but one": n heaps.  Delete n-1 heaps, split the
  survivor into n non-empty heaps.  Terminal: every heap <= n-1.
* ``NMTH(n)``      -- "no more than half": n heaps.  Choose k <= n/2,
  delete k heaps, split k of the remaining heaps each into two non-empty
  heaps.  Terminal: all heaps are 1.
* ``Half(m)``      -- 2m heaps.  Delete m heaps and split each of the m
  kept heaps into two non-empty heaps.  Terminal: fewer than m heaps >= 2.
* ``KFrac(k, m)``  -- km heaps.  Delete (k-1)m heaps and split each of the
  m kept heaps into k non-empty heaps.  Terminal: fewer than m heaps >= k.
* ``Single(n)``    -- n heaps.  Delete one heap and split one other heap
  into two non-empty heaps.  Terminal: all heaps are 1.

Positions are canonical: a sorted (non-decreasing) tuple of heap sizes,
so a position is really a multiset.  Moves reference heap indices in the
canonical order of the position they apply to.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union


class GameError(Exception):
    """Base class for the domain errors raised by this package."""


class WrongArity(GameError):
    """A position has the wrong number of heaps for its ruleset."""


class IllegalHeapSize(GameError):
    """A heap size is outside the legal range for its ruleset."""


class IllegalMove(GameError):
    """A move record does not describe a legal move.

    ``reason`` is a machine-readable code, one of: ``bad-index``,
    ``bad-cardinality``, ``deleted-and-split-overlap``, ``empty-part``,
    ``part-sum-mismatch``.
    """

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


class Unsupported(GameError):
    """The request is well-formed but outside the characterized territory."""


class InternalContradiction(GameError):
    """A constructed winning move failed its own postcondition.

    Raised only if an implementation bug (or a falsified theorem) is
    detected; never part of normal control flow.
    """


class RulesetCodeError(GameError):
    """A ruleset code string could not be parsed."""


class PN(enum.Enum):
    """Normal-play outcome class: P = previous player wins (the player to
    move loses), N = next player (the player to move) wins."""

    P = "P"
    N = "N"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Position:
    """A canonical position: heap sizes as a non-decreasing tuple."""

    heaps: tuple[int, ...]

    def __post_init__(self):
        heaps = tuple(self.heaps)
        object.__setattr__(self, "heaps", heaps)
        for a, b in zip(heaps, heaps[1:]):
            if a > b:
                raise ValueError(f"heaps not sorted: {heaps}")
        if heaps and heaps[0] < 0:
            raise ValueError(f"negative heap size: {heaps}")

    def __str__(self) -> str:
        return ",".join(str(h) for h in self.heaps)

    def __len__(self) -> int:
        return len(self.heaps)

    def __iter__(self):
        return iter(self.heaps)


@dataclass(frozen=True)
class MoveRecord:
    """One move: delete some heaps, split some of the kept heaps.

    ``deleted`` holds indices into the pre-move canonical position, sorted
    ascending.  ``splits`` maps kept indices to the ordered list of parts
    the heap is split into, stored as index-sorted pairs.  The deleted and
    split index sets must be disjoint; ``apply_move`` enforces this along
    with the per-ruleset cardinality and size rules.

    For DeleteNim the split parts sum to the selected heap minus one (the
    removed token) and parts may be zero; everywhere else parts are
    positive and sum to the exact heap size.
    """

    deleted: tuple[int, ...]
    splits: tuple[tuple[int, tuple[int, ...]], ...]

    @staticmethod
    def make(deleted: Iterable[int], splits: Mapping[int, Sequence[int]]) -> "MoveRecord":
        return MoveRecord(
            tuple(sorted(deleted)),
            tuple(sorted((i, tuple(parts)) for i, parts in splits.items())),
        )

    @property
    def splits_dict(self) -> dict[int, tuple[int, ...]]:
        return dict(self.splits)


@dataclass(frozen=True)
class Outcome:
    """Outcome class plus the condition that decided it.

    ``certificate`` names the theorem condition that matched (for P) or
    the first violated condition in documented order (for N); see the
    classifier module for the closed label set.
    """

    pn: PN
    certificate: str | None = None


@dataclass(frozen=True)
class DeleteNim:
    """Two heaps, zeros allowed; see module docstring."""

    @property
    def heap_count(self) -> int:
        return 2

    @property
    def min_heap(self) -> int:
        return 0

    def code(self) -> str:
        return "delete-nim"


@dataclass(frozen=True)
class VDN:
    """Two heaps; delete one, split the other into two non-empty heaps."""

    @property
    def heap_count(self) -> int:
        return 2

    @property
    def min_heap(self) -> int:
        return 1

    def code(self) -> str:
        return "vdn"


@dataclass(frozen=True)
class ABO:
    """n heaps; delete all but one, split the survivor into n parts."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"ABO requires n >= 2, got {self.n}")

    @property
    def heap_count(self) -> int:
        return self.n

    @property
    def min_heap(self) -> int:
        return 1

    def code(self) -> str:
        return f"abo:{self.n}"


@dataclass(frozen=True)
class NMTH:
    """n heaps; delete k <= n/2 heaps and split k others in two."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"NMTH requires n >= 2, got {self.n}")

    @property
    def heap_count(self) -> int:
        return self.n

    @property
    def min_heap(self) -> int:
        return 1

    def code(self) -> str:
        return f"nmth:{self.n}"


@dataclass(frozen=True)
class Half:
    """2m heaps; delete m heaps and split each kept heap in two."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"Half requires m >= 1, got {self.m}")

    @property
    def heap_count(self) -> int:
        return 2 * self.m

    @property
    def min_heap(self) -> int:
        return 1

    def code(self) -> str:
        return f"half:{self.m}"


@dataclass(frozen=True)
class KFrac:
    """km heaps; delete (k-1)m heaps and split each kept heap into k."""

    k: int
    m: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"KFrac requires k >= 2, got {self.k}")
        if self.m < 1:
            raise ValueError(f"KFrac requires m >= 1, got {self.m}")

    @property
    def heap_count(self) -> int:
        return self.k * self.m

    @property
    def min_heap(self) -> int:
        return 1

    def code(self) -> str:
        return f"kfrac:{self.k},{self.m}"


@dataclass(frozen=True)
class Single:
    """n heaps; delete one heap and split one other heap in two."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"Single requires n >= 2, got {self.n}")

    @property
    def heap_count(self) -> int:
        return self.n

    @property
    def min_heap(self) -> int:
        return 1

    def code(self) -> str:
        return f"single:{self.n}"


Ruleset = Union[DeleteNim, VDN, ABO, NMTH, Half, KFrac, Single]

# Families, their code grammar and parameter bounds; served to clients so
# they can validate before calling.  Single is capped at n=4 because the
# outcome of single-delete games with five or more heaps is uncharacterized.
RULESET_FAMILIES: tuple[dict, ...] = (
    {"family": "delete-nim", "example": "delete-nim", "heap_count": 2, "params": {},
     "zeros_allowed": True,
     "label": "Delete Nim (2 heaps, zeros allowed)"},
    {"family": "vdn", "example": "vdn", "heap_count": 2, "params": {},
     "label": "Variant Delete Nim (2 heaps)"},
    {"family": "abo", "example": "abo:3", "params": {"n": {"min": 2}},
     "label": "All-but-one delete (n heaps)"},
    {"family": "nmth", "example": "nmth:3", "params": {"n": {"min": 2}},
     "label": "No-more-than-half delete (n heaps)"},
    {"family": "half", "example": "half:2", "params": {"m": {"min": 1}},
     "label": "Half delete (2m heaps)"},
    {"family": "kfrac", "example": "kfrac:3,2", "params": {"k": {"min": 2}, "m": {"min": 1}},
     "label": "(k-1)/k delete (km heaps)"},
    {"family": "single", "example": "single:3",
     "params": {"n": {"min": 2, "max": 4}},
     "note": "n >= 5 is uncharacterized and rejected",
     "label": "Single delete (n heaps)"},
)


def parse_ruleset(code: str) -> Ruleset:
    """Parse a ruleset code such as ``abo:3`` or ``kfrac:3,2``.

    Grammar: ``delete-nim`` | ``vdn`` | ``abo:n`` | ``nmth:n`` | ``half:m``
    | ``kfrac:k,m`` | ``single:n``.  Raises RulesetCodeError on anything
    else (including out-of-range parameters).
    """
    text = code.strip().lower()
    family, sep, arg = text.partition(":")
    try:
        if family == "delete-nim":
            if sep:
                raise ValueError("delete-nim takes no parameters")
            return DeleteNim()
        if family == "vdn":
            if sep:
                raise ValueError("vdn takes no parameters")
            return VDN()
        if family == "abo":
            return ABO(int(arg))
        if family == "nmth":
            return NMTH(int(arg))
        if family == "half":
            return Half(int(arg))
        if family == "kfrac":
            k_text, _, m_text = arg.partition(",")
            return KFrac(int(k_text), int(m_text))
        if family == "single":
            return Single(int(arg))
    except (ValueError, TypeError) as exc:
        raise RulesetCodeError(f"bad ruleset code {code!r}: {exc}") from exc
    raise RulesetCodeError(f"unknown ruleset family {family!r} in {code!r}")


def canonicalize(ruleset: Ruleset, heaps: Iterable[int]) -> Position:
    """Sort heap sizes into a canonical Position, validating against the
    ruleset: exact heap count (WrongArity) and the per-ruleset minimum heap
    size (IllegalHeapSize; only DeleteNim admits empty heaps)."""
    sizes = list(heaps)
    if len(sizes) != ruleset.heap_count:
        raise WrongArity(
            f"{ruleset.code()} positions have {ruleset.heap_count} heaps, got {len(sizes)}"
        )
    low = ruleset.min_heap
    for h in sizes:
        if not isinstance(h, int) or isinstance(h, bool):
            raise IllegalHeapSize(f"heap sizes must be integers, got {h!r}")
        if h < low:
            raise IllegalHeapSize(
                f"heap size {h} below minimum {low} for {ruleset.code()}"
            )
    return Position(tuple(sorted(sizes)))


def is_terminal(ruleset: Ruleset, p: Position) -> bool:
    """True iff no legal move exists from canonical position ``p``.

    Closed form per family: DeleteNim <0,0>; VDN <1,1>; ABO(n) all heaps
    <= n-1; NMTH(n) and Single(n) all heaps = 1; Half(m) fewer than m heaps
    >= 2; KFrac(k,m) fewer than m heaps >= k.
    """
    heaps = p.heaps
    match ruleset:
        case DeleteNim():
            return heaps == (0, 0)
        case VDN():
            return heaps == (1, 1)
        case ABO(n=n):
            return all(h <= n - 1 for h in heaps)
        case NMTH() | Single():
            return all(h == 1 for h in heaps)
        case Half(m=m):
            return sum(1 for h in heaps if h >= 2) < m
        case KFrac(k=k, m=m):
            return sum(1 for h in heaps if h >= k) < m
    raise TypeError(f"unknown ruleset {ruleset!r}")
