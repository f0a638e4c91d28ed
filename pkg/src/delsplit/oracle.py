"""Exhaustive game-tree solving and classifier-vs-oracle sweeps.

The oracle knows nothing about the closed-form theorems: it decides
outcomes purely from the move relation (a position is P iff every option
is N) and computes Grundy values as the minimum excludant of the option
values.  Sweeps run both the oracle and the classifier over every
canonical position in a bounded region and report row-by-row agreement;
a disagreement would falsify a theorem (or expose a bug), which is the
whole point of this module.

Every move strictly decreases the total token count, and split parts
never exceed the heap they came from, so the option closure of a bounded
region stays inside the region: memo tables are finite and sweep recursion
is shallow.  A configurable token budget (default 96) guards ad-hoc calls
against accidentally huge explorations.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Sequence

from .classifier import classify_heaps
from .core import (
    DeleteNim,
    GameError,
    InternalContradiction,
    PN,
    Position,
    Ruleset,
)
from .strategy import successors, winning_move

DEFAULT_MAX_TOKENS = 96
DEFAULT_MAX_POSITIONS = 2_000_000


class LimitExceeded(GameError):
    """A solve or sweep went beyond its configured budget."""


class MemoTable:
    """Write-once memo of solved positions, keyed by (ruleset, heaps).

    Entries record the outcome and/or Grundy value.  Writes are
    write-once (a conflicting rewrite raises InternalContradiction), and
    whenever both fields are present they must agree: P iff Grundy 0.
    """

    def __init__(self):
        self._outcomes: dict[Ruleset, dict[tuple[int, ...], bool]] = {}
        self._grundies: dict[Ruleset, dict[tuple[int, ...], int]] = {}

    def outcomes(self, ruleset: Ruleset) -> dict[tuple[int, ...], bool]:
        return self._outcomes.setdefault(ruleset, {})

    def grundies(self, ruleset: Ruleset) -> dict[tuple[int, ...], int]:
        return self._grundies.setdefault(ruleset, {})

    def __len__(self) -> int:
        return sum(len(d) for d in self._outcomes.values()) + sum(
            len(d) for d in self._grundies.values()
        )

    def store_outcome(self, ruleset: Ruleset, heaps: tuple[int, ...], mover_wins: bool):
        table = self.outcomes(ruleset)
        old = table.get(heaps)
        if old is not None and old != mover_wins:
            raise InternalContradiction(f"memo rewrite for {heaps}: {old} -> {mover_wins}")
        grundy = self.grundies(ruleset).get(heaps)
        if grundy is not None and (grundy != 0) != mover_wins:
            raise InternalContradiction(
                f"outcome/grundy mismatch for {heaps}: grundy {grundy}, mover_wins {mover_wins}"
            )
        table[heaps] = mover_wins

    def store_grundy(self, ruleset: Ruleset, heaps: tuple[int, ...], grundy: int):
        table = self.grundies(ruleset)
        old = table.get(heaps)
        if old is not None and old != grundy:
            raise InternalContradiction(f"memo rewrite for {heaps}: {old} -> {grundy}")
        outcome = self.outcomes(ruleset).get(heaps)
        if outcome is not None and (grundy != 0) != outcome:
            raise InternalContradiction(
                f"outcome/grundy mismatch for {heaps}: grundy {grundy}, mover_wins {outcome}"
            )
        table[heaps] = grundy

    def entry(self, ruleset: Ruleset, heaps: tuple[int, ...]) -> tuple[PN | None, int | None]:
        mover_wins = self.outcomes(ruleset).get(heaps)
        outcome = None if mover_wins is None else (PN.N if mover_wins else PN.P)
        return outcome, self.grundies(ruleset).get(heaps)


class Oracle:
    """Memoized exhaustive solver for outcomes and Grundy values.

    ``max_tokens`` bounds the total token count of any position solved;
    ``max_positions`` bounds the memo size.  ``use_memo=False`` disables
    memoization entirely (exponential -- for transparency tests only).
    """

    def __init__(
        self,
        max_tokens: int = DEFAULT_MAX_TOKENS,
        max_positions: int = DEFAULT_MAX_POSITIONS,
        use_memo: bool = True,
    ):
        self.max_tokens = max_tokens
        self.max_positions = max_positions
        self.memo: MemoTable | None = MemoTable() if use_memo else None

    def _check(self, heaps: tuple[int, ...]):
        total = sum(heaps)
        if total > self.max_tokens:
            raise LimitExceeded(
                f"position holds {total} tokens, budget is {self.max_tokens}"
            )

    def solve_outcome(self, ruleset: Ruleset, p: Position | Sequence[int]) -> PN:
        """P or N by exhaustive search: P iff every option is N."""
        heaps = _heaps_of(p)
        self._check(heaps)
        table = None if self.memo is None else self.memo.outcomes(ruleset)
        return PN.N if self._win(ruleset, heaps, table) else PN.P

    def solve_grundy(self, ruleset: Ruleset, p: Position | Sequence[int]) -> int:
        """Grundy value by exhaustive search: mex of the option values."""
        heaps = _heaps_of(p)
        self._check(heaps)
        table = None if self.memo is None else self.memo.grundies(ruleset)
        return self._grundy(ruleset, heaps, table)

    # The recursive workers write to the memo dicts directly: a position is
    # never its own descendant (token counts strictly decrease), so each
    # slot is written exactly once and the MemoTable invariants hold.

    def _win(
        self,
        ruleset: Ruleset,
        heaps: tuple[int, ...],
        table: dict[tuple[int, ...], bool] | None,
    ) -> bool:
        if table is not None:
            cached = table.get(heaps)
            if cached is not None:
                return cached
        mover_wins = False
        for succ in successors(ruleset, heaps):
            if not self._win(ruleset, succ, table):
                mover_wins = True
                break
        if table is not None:
            if len(table) >= self.max_positions:
                raise LimitExceeded(f"memo exceeded {self.max_positions} positions")
            table[heaps] = mover_wins
        return mover_wins

    def _grundy(
        self,
        ruleset: Ruleset,
        heaps: tuple[int, ...],
        table: dict[tuple[int, ...], int] | None,
    ) -> int:
        if table is not None:
            cached = table.get(heaps)
            if cached is not None:
                return cached
        values = {
            self._grundy(ruleset, succ, table)
            for succ in set(successors(ruleset, heaps))
        }
        g = 0
        while g in values:
            g += 1
        if table is not None:
            if len(table) >= self.max_positions:
                raise LimitExceeded(f"memo exceeded {self.max_positions} positions")
            table[heaps] = g
        return g


def _heaps_of(p: Position | Sequence[int]) -> tuple[int, ...]:
    heaps = p.heaps if isinstance(p, Position) else tuple(p)
    if any(a > b for a, b in zip(heaps, heaps[1:])):
        raise ValueError(f"position not canonical: {heaps}")
    return heaps


def iter_region(ruleset: Ruleset, max_heap: int) -> Iterator[tuple[int, ...]]:
    """Every canonical heap tuple with all heaps in the legal range up to
    ``max_heap``, in lexicographic order."""
    low = ruleset.min_heap
    return combinations_with_replacement(range(low, max_heap + 1), ruleset.heap_count)


@dataclass(frozen=True)
class SweepRow:
    heaps: tuple[int, ...]
    closed: PN
    oracle: PN
    grundy: int

    @property
    def agree(self) -> bool:
        return self.closed is self.oracle


@dataclass
class SweepReport:
    """Row-by-row classifier-vs-oracle comparison over a bounded region."""

    ruleset: Ruleset
    max_heap: int
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def mismatches(self) -> int:
        return sum(1 for row in self.rows if not row.agree)

    def summary(self) -> dict:
        p_count = sum(1 for row in self.rows if row.oracle is PN.P)
        return {
            "ruleset": self.ruleset.code(),
            "max_heap": self.max_heap,
            "positions": len(self.rows),
            "p_positions": p_count,
            "n_positions": len(self.rows) - p_count,
            "mismatches": self.mismatches,
        }

    def to_csv(self) -> str:
        lines = ["heaps;closed;oracle;grundy;agree"]
        for row in self.rows:
            heaps = ",".join(str(h) for h in row.heaps)
            agree = "true" if row.agree else "false"
            lines.append(f"{heaps};{row.closed};{row.oracle};{row.grundy};{agree}")
        return "\n".join(lines) + "\n"

    def to_jsonl(self) -> str:
        lines = []
        for row in self.rows:
            lines.append(
                json.dumps(
                    {
                        "heaps": list(row.heaps),
                        "closed": str(row.closed),
                        "oracle": str(row.oracle),
                        "grundy": row.grundy,
                        "agree": row.agree,
                    },
                    separators=(",", ":"),
                )
            )
        return "\n".join(lines) + "\n"


def region_oracle(ruleset: Ruleset, max_heap: int) -> Oracle:
    """An Oracle whose token budget exactly admits the given region."""
    tokens = max(DEFAULT_MAX_TOKENS, ruleset.heap_count * max_heap)
    return Oracle(max_tokens=tokens)


def sweep(
    ruleset: Ruleset,
    max_heap: int,
    oracle: Oracle | None = None,
    jobs: int = 1,
) -> SweepReport:
    """Compare the classifier against the oracle over the whole region.

    With ``jobs > 1`` the root set is partitioned across worker processes;
    workers re-derive shared subpositions independently, which wastes work
    but cannot change any answer.  Row order is always lexicographic.
    """
    if oracle is None:
        oracle = region_oracle(ruleset, max_heap)
    region_tokens = ruleset.heap_count * max_heap
    if region_tokens > oracle.max_tokens:
        raise LimitExceeded(
            f"region needs {region_tokens} tokens, oracle budget is {oracle.max_tokens}"
        )
    roots = list(iter_region(ruleset, max_heap))
    if jobs > 1 and len(roots) > 1:
        chunks = _chunk(roots, jobs * 4)
        args = [(ruleset, max_heap, chunk) for chunk in chunks]
        rows: list[SweepRow] = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_sweep_chunk, args):
                rows.extend(part)
    else:
        rows = _solve_rows(ruleset, roots, oracle)
    return SweepReport(ruleset=ruleset, max_heap=max_heap, rows=rows)


def _chunk(items: list, pieces: int) -> list[list]:
    size = max(1, (len(items) + pieces - 1) // pieces)
    return [items[i : i + size] for i in range(0, len(items), size)]


def _sweep_chunk(args: tuple[Ruleset, int, list[tuple[int, ...]]]) -> list[SweepRow]:
    ruleset, max_heap, roots = args
    return _solve_rows(ruleset, roots, region_oracle(ruleset, max_heap))


def _solve_rows(ruleset: Ruleset, roots: Iterable[tuple[int, ...]], oracle: Oracle) -> list[SweepRow]:
    rows = []
    for heaps in roots:
        closed = classify_heaps(ruleset, heaps).pn
        outcome = oracle.solve_outcome(ruleset, heaps)
        grundy = oracle.solve_grundy(ruleset, heaps)
        rows.append(SweepRow(heaps=heaps, closed=closed, oracle=outcome, grundy=grundy))
    return rows


def strategy_violations(
    ruleset: Ruleset,
    rows: Iterable[SweepRow],
    oracle: Oracle,
    limit: int = 50,
) -> list[str]:
    """Soundness check of the constructed strategy against the oracle.

    For every N row: winning_move must produce a legal move whose
    successor is P by both classifier and oracle.  For every P row:
    winning_move must decline, and every option must be N by both.
    Returns human-readable violation descriptions (at most ``limit``).
    """
    problems: list[str] = []

    def note(text: str) -> bool:
        problems.append(text)
        return len(problems) >= limit

    for row in rows:
        p = Position(row.heaps)
        choice = winning_move(ruleset, p)
        if row.oracle is PN.N:
            if choice is None:
                if note(f"{p}: oracle says N but no winning move constructed"):
                    break
                continue
            succ = choice.result.heaps
            if classify_heaps(ruleset, succ).pn is not PN.P:
                if note(f"{p}: constructed successor {choice.result} classifies N"):
                    break
            if oracle.solve_outcome(ruleset, succ) is not PN.P:
                if note(f"{p}: constructed successor {choice.result} solves to N"):
                    break
        else:
            if choice is not None:
                if note(f"{p}: oracle says P but a winning move was constructed"):
                    break
                continue
            for succ in set(successors(ruleset, row.heaps)):
                if classify_heaps(ruleset, succ).pn is not PN.N:
                    if note(f"{p}: option {succ} of a P-position classifies P"):
                        break
                if oracle.solve_outcome(ruleset, succ) is not PN.N:
                    if note(f"{p}: option {succ} of a P-position solves to P"):
                        break
            else:
                continue
            if len(problems) >= limit:
                break
    return problems
