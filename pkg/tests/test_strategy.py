"""Move enumeration, move application and the constructed winning moves."""

from itertools import combinations, permutations, product

import pytest

from delsplit import (
    IllegalMove,
    MoveRecord,
    PN,
    Position,
    apply_move,
    canonicalize,
    classify_heaps,
    is_terminal,
    iter_region,
    legal_moves,
    parse_ruleset,
    successors,
    winning_move,
)
from delsplit.strategy import partitions_into


def pos(heaps):
    return Position(tuple(sorted(heaps)))


# ---------------------------------------------------------------------------
# enumeration examples


def test_partitions_into():
    assert partitions_into(5, 2) == ((1, 4), (2, 3))
    assert partitions_into(6, 3) == ((1, 1, 4), (1, 2, 3), (2, 2, 2))
    assert partitions_into(2, 3) == ()
    assert partitions_into(3, 3) == ((1, 1, 1),)


def test_single4_option_example():
    ruleset = parse_ruleset("single:4")
    results = {c.result.heaps for c in legal_moves(ruleset, pos((1, 2, 2, 2)))}
    assert results == {(1, 1, 2, 2), (1, 1, 1, 2)}


def test_vdn_terminal_has_no_moves():
    assert legal_moves(parse_ruleset("vdn"), pos((1, 1))) == []


def test_delete_nim_zero_splits_collapse():
    # From <0,2>: select the 2, delete the 0, remove one token and split 1
    # into (0,1) or (1,0) -- the same option either way.
    ruleset = parse_ruleset("delete-nim")
    choices = legal_moves(ruleset, pos((0, 2)))
    assert [c.result.heaps for c in choices] == [(0, 1)]


def test_abo3_option_includes_winning_split():
    ruleset = parse_ruleset("abo:3")
    results = {c.result.heaps for c in legal_moves(ruleset, pos((1, 1, 9)))}
    assert (1, 1, 7) in results
    # every option keeps exactly one original heap's tokens
    assert all(sum(r) == 9 for r in results)


def test_legal_moves_sorted_and_unique():
    for code, heaps in [
        ("abo:3", (2, 5, 9)),
        ("nmth:4", (2, 3, 4, 5)),
        ("half:2", (2, 3, 4, 5)),
        ("single:4", (2, 3, 4, 5)),
        ("delete-nim", (3, 7)),
    ]:
        choices = legal_moves(parse_ruleset(code), pos(heaps))
        keys = [(c.result.heaps, c.record) for c in choices]
        assert len(set(keys)) == len(keys)
        assert [c.result.heaps for c in choices] == sorted(
            c.result.heaps for c in choices
        )


def test_move_choice_applies_to_its_result():
    for code, bound in [
        ("delete-nim", 6),
        ("vdn", 8),
        ("abo:3", 7),
        ("nmth:3", 6),
        ("nmth:4", 5),
        ("half:2", 5),
        ("single:4", 5),
        ("kfrac:3,2", 4),
    ]:
        ruleset = parse_ruleset(code)
        for heaps in iter_region(ruleset, bound):
            p = Position(heaps)
            for choice in legal_moves(ruleset, p):
                assert apply_move(ruleset, p, choice.record) == choice.result


def test_successors_match_legal_moves():
    for code, bound in [
        ("delete-nim", 7),
        ("abo:3", 7),
        ("nmth:4", 5),
        ("half:2", 5),
        ("single:3", 7),
        ("kfrac:3,2", 4),
    ]:
        ruleset = parse_ruleset(code)
        for heaps in iter_region(ruleset, bound):
            p = Position(heaps)
            via_moves = {c.result.heaps for c in legal_moves(ruleset, p)}
            assert set(successors(ruleset, heaps)) == via_moves, heaps


# ---------------------------------------------------------------------------
# independent naive enumerator (generate-and-filter, ordered compositions)


def compositions(total, count):
    if count == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - count + 2):
        for rest in compositions(total - first, count - 1):
            yield (first, *rest)


def naive_options(ruleset, heaps):
    """Successor set straight from the rules, no dedup cleverness."""
    code = ruleset.code()
    n = len(heaps)
    out = set()
    if code == "delete-nim":
        for keep in (0, 1):
            if heaps[keep] < 1:
                continue
            for a in range(heaps[keep]):
                out.add(tuple(sorted((a, heaps[keep] - 1 - a))))
        return out
    if code.startswith(("vdn", "abo", "half", "kfrac")):
        if code == "vdn":
            k, m = 2, 1
        elif code.startswith("abo"):
            k, m = ruleset.n, 1
        elif code.startswith("half"):
            k, m = 2, ruleset.m
        else:
            k, m = ruleset.k, ruleset.m
        for kept in combinations(range(n), m):
            if any(heaps[i] < k for i in kept):
                continue
            part_choices = [list(compositions(heaps[i], k)) for i in kept]
            for assignment in product(*part_choices):
                parts = [q for comp in assignment for q in comp]
                out.add(tuple(sorted(parts)))
        return out
    if code.startswith("nmth"):
        for k in range(1, n // 2 + 1):
            for deleted in combinations(range(n), k):
                rest = [i for i in range(n) if i not in deleted]
                for split in combinations(rest, k):
                    if any(heaps[i] < 2 for i in split):
                        continue
                    part_choices = [list(compositions(heaps[i], 2)) for i in split]
                    for assignment in product(*part_choices):
                        untouched = [heaps[i] for i in rest if i not in split]
                        parts = [q for comp in assignment for q in comp]
                        out.add(tuple(sorted(untouched + parts)))
        return out
    if code.startswith("single"):
        for deleted in range(n):
            for split in range(n):
                if split == deleted or heaps[split] < 2:
                    continue
                untouched = [heaps[i] for i in range(n) if i not in (deleted, split)]
                for comp in compositions(heaps[split], 2):
                    out.add(tuple(sorted(untouched + list(comp))))
        return out
    raise AssertionError(code)


NAIVE_CONFIGS = [
    ("delete-nim", 8),
    ("vdn", 8),
    ("abo:3", 8),
    ("abo:4", 6),
    ("nmth:3", 7),
    ("nmth:4", 5),
    ("nmth:5", 4),
    ("half:2", 6),
    ("half:3", 4),
    ("kfrac:3,2", 5),
    ("single:3", 8),
    ("single:4", 6),
]


@pytest.mark.parametrize("code,bound", NAIVE_CONFIGS)
def test_enumeration_complete_vs_naive(code, bound):
    ruleset = parse_ruleset(code)
    for heaps in iter_region(ruleset, bound):
        expected = naive_options(ruleset, heaps)
        got = {c.result.heaps for c in legal_moves(ruleset, Position(heaps))}
        assert got == expected, heaps
        assert (len(got) == 0) == is_terminal(ruleset, Position(heaps))


def naive_move_count(ruleset, heaps):
    """Distinct moves by brute force, deduplicated exactly as documented:
    same deleted-size multiset plus same multiset of (heap, parts) splits."""
    code = ruleset.code()
    n = len(heaps)
    moves = set()

    def add(deleted, split_items):
        deleted_sizes = tuple(sorted(heaps[i] for i in deleted))
        split_key = tuple(
            sorted((heaps[i], tuple(sorted(parts))) for i, parts in split_items)
        )
        moves.add((deleted_sizes, split_key))

    if code == "delete-nim":
        for keep in (0, 1):
            if heaps[keep] < 1:
                continue
            for a in range(heaps[keep]):
                add((1 - keep,), [(keep, (a, heaps[keep] - 1 - a))])
        return len(moves)
    if code.startswith("nmth"):
        for k in range(1, n // 2 + 1):
            for deleted in combinations(range(n), k):
                rest = [i for i in range(n) if i not in deleted]
                for split in combinations(rest, k):
                    if any(heaps[i] < 2 for i in split):
                        continue
                    part_choices = [list(compositions(heaps[i], 2)) for i in split]
                    for assignment in product(*part_choices):
                        add(deleted, list(zip(split, assignment)))
        return len(moves)
    if code.startswith("single"):
        for deleted in range(n):
            for split in range(n):
                if split == deleted or heaps[split] < 2:
                    continue
                for comp in compositions(heaps[split], 2):
                    add((deleted,), [(split, comp)])
        return len(moves)
    # the keep-and-split-everything families
    if code == "vdn":
        k, m = 2, 1
    elif code.startswith("abo"):
        k, m = ruleset.n, 1
    elif code.startswith("half"):
        k, m = 2, ruleset.m
    else:
        k, m = ruleset.k, ruleset.m
    for kept in combinations(range(n), m):
        if any(heaps[i] < k for i in kept):
            continue
        deleted = tuple(i for i in range(n) if i not in kept)
        part_choices = [list(compositions(heaps[i], k)) for i in kept]
        for assignment in product(*part_choices):
            add(deleted, list(zip(kept, assignment)))
    return len(moves)


@pytest.mark.parametrize("code,bound", NAIVE_CONFIGS)
def test_move_count_vs_naive(code, bound):
    ruleset = parse_ruleset(code)
    for heaps in iter_region(ruleset, bound):
        expected = naive_move_count(ruleset, heaps)
        assert len(legal_moves(ruleset, Position(heaps))) == expected, heaps


# ---------------------------------------------------------------------------
# apply_move validation


def test_apply_move_examples():
    abo3 = parse_ruleset("abo:3")
    record = MoveRecord.make((0, 1), {2: (1, 1, 7)})
    assert apply_move(abo3, pos((1, 1, 9)), record).heaps == (1, 1, 7)

    nmth3 = parse_ruleset("nmth:3")
    record = MoveRecord.make((2,), {0: (1, 1)})
    assert apply_move(nmth3, pos((2, 3, 5)), record).heaps == (1, 1, 3)


def test_apply_move_on_terminal_rejects():
    vdn = parse_ruleset("vdn")
    with pytest.raises(IllegalMove):
        apply_move(vdn, pos((1, 1)), MoveRecord.make((0,), {1: (1,)}))


def reason_of(callable_):
    with pytest.raises(IllegalMove) as err:
        callable_()
    return err.value.reason


def test_apply_move_reason_codes():
    vdn = parse_ruleset("vdn")
    p = pos((2, 5))
    assert reason_of(
        lambda: apply_move(vdn, p, MoveRecord.make((7,), {1: (2, 3)}))
    ) == "bad-index"
    assert reason_of(
        lambda: apply_move(vdn, p, MoveRecord.make((1,), {1: (2, 3)}))
    ) == "deleted-and-split-overlap"
    assert reason_of(
        lambda: apply_move(vdn, p, MoveRecord.make((), {1: (2, 3)}))
    ) == "bad-cardinality"
    assert reason_of(
        lambda: apply_move(vdn, p, MoveRecord.make((0,), {1: (2, 3, 0)}))
    ) == "bad-cardinality"
    assert reason_of(
        lambda: apply_move(vdn, p, MoveRecord.make((0,), {1: (5, 0)}))
    ) == "empty-part"
    assert reason_of(
        lambda: apply_move(vdn, p, MoveRecord.make((0,), {1: (2, 2)}))
    ) == "part-sum-mismatch"


def test_apply_move_nmth_cardinality():
    nmth4 = parse_ruleset("nmth:4")
    p = pos((2, 3, 4, 5))
    # k = 3 exceeds n/2 = 2
    record = MoveRecord.make((0, 1, 2), {3: (2, 3)})
    assert reason_of(lambda: apply_move(nmth4, p, record)) == "bad-cardinality"
    # deleted and split counts must match
    record = MoveRecord.make((0, 1), {3: (2, 3)})
    assert reason_of(lambda: apply_move(nmth4, p, record)) == "bad-cardinality"


def test_apply_move_delete_nim_zero_parts():
    dn = parse_ruleset("delete-nim")
    p = pos((0, 4))
    # parts sum to heap - 1 and zero parts are fine
    record = MoveRecord.make((0,), {1: (0, 3)})
    assert apply_move(dn, p, record).heaps == (0, 3)
    record = MoveRecord.make((0,), {1: (2, 2)})
    assert reason_of(lambda: apply_move(dn, p, record)) == "part-sum-mismatch"


def test_apply_move_permutation_equivalence():
    # the same move written against any index permutation of equal heaps
    # lands on the same canonical result
    half2 = parse_ruleset("half:2")
    p = pos((2, 2, 3, 3))
    a = apply_move(half2, p, MoveRecord.make((0, 2), {1: (1, 1), 3: (1, 2)}))
    b = apply_move(half2, p, MoveRecord.make((1, 3), {0: (1, 1), 2: (2, 1)}))
    assert a == b


# ---------------------------------------------------------------------------
# constructed winning moves


def test_winning_move_examples():
    abo3 = parse_ruleset("abo:3")
    choice = winning_move(abo3, pos((1, 1, 9)))
    assert choice.result.heaps == (1, 1, 7)

    nmth3 = parse_ruleset("nmth:3")
    choice = winning_move(nmth3, pos((2, 3, 5)))
    assert choice.result.heaps == (1, 1, 3)

    half2 = parse_ruleset("half:2")
    assert winning_move(half2, pos((1, 1, 3, 4))) is None

    dn = parse_ruleset("delete-nim")
    choice = winning_move(dn, pos((3, 5)))
    assert classify_heaps(dn, choice.result.heaps).pn is PN.P


def test_winning_move_on_kfrac_ceiling_violation():
    # ceiling condition violated: the move must lift every remaining
    # evenoid heap above the new power-of-k ceiling
    kfrac = parse_ruleset("kfrac:3,2")
    choice = winning_move(kfrac, pos((1, 1, 2, 2, 13, 15)))
    assert choice is not None
    assert classify_heaps(kfrac, choice.result.heaps).pn is PN.P


WINNING_REGIONS = [
    ("delete-nim", 20),
    ("vdn", 20),
    ("abo:3", 14),
    ("abo:4", 10),
    ("nmth:3", 12),
    ("nmth:4", 8),
    ("nmth:5", 7),
    ("half:2", 8),
    ("half:3", 5),
    ("kfrac:3,2", 6),
    ("single:2", 14),
    ("single:3", 10),
    ("single:4", 8),
]


@pytest.mark.parametrize("code,bound", WINNING_REGIONS)
def test_winning_move_none_iff_p(code, bound):
    # winning_move internally re-classifies its constructed successor and
    # raises InternalContradiction on failure, so this loop also proves
    # every constructed move lands on P.
    ruleset = parse_ruleset(code)
    for heaps in iter_region(ruleset, bound):
        p = Position(heaps)
        choice = winning_move(ruleset, p)
        if classify_heaps(ruleset, heaps).pn is PN.P:
            assert choice is None, heaps
        else:
            assert choice is not None, heaps
            assert apply_move(ruleset, p, choice.record) == choice.result


def test_winning_move_respects_canonical_input():
    with pytest.raises(ValueError):
        Position((9, 1, 1))
    # canonicalize first, then ask
    ruleset = parse_ruleset("abo:3")
    p = canonicalize(ruleset, [9, 1, 1])
    assert winning_move(ruleset, p).result.heaps == (1, 1, 7)
