"""Closed-form outcome classification for every supported ruleset.

Each family has a decidable characterization of its P-positions:

* DeleteNim: P iff both heaps are even; the Grundy value of <x,y> is
  v2((x|y)+1).
* VDN: P iff both heaps are odd.
* ABO(n): P iff every heap is n-oddoid (heap mod n(n-1) in 1..n-1).
* NMTH(n): n even -- P iff every heap is odd; n odd -- P iff all heaps
  share one 2-adic valuation.
* Half(m) and KFrac(k, m) (Half(m) = KFrac(2, m)): sort the heaps
  z_1 <= ... <= z_km and let k**s be the least power of k exceeding
  z_{(k-1)m+1}.  P iff (a) z_1 .. z_{(k-1)m+1} are all k-oddoid and
  (b) every k-evenoid heap is >= k**s.
* Single(2) = VDN; Single(3): all heaps share one 2-adic valuation;
  Single(4): the five-case binary-digit characterization implemented in
  ``_single4_eval``.  Single(n >= 5) raises Unsupported: those games have
  no known characterization.

Certificates use a closed label set (CONDITION_IDS).  A P outcome carries
the matched condition; an N outcome carries the first violated condition
in the documented order.  For the conjunctive Half/KFrac theorem the
matched P label is ``kfrac-ab``; for Single(4), N positions whose
valuation pattern matches no case carry ``single4-case1``, the first
condition in documented order (the all-equal case).
"""

from __future__ import annotations

from typing import Sequence

from .core import (
    ABO,
    DeleteNim,
    Half,
    KFrac,
    NMTH,
    Outcome,
    PN,
    Position,
    Ruleset,
    Single,
    Unsupported,
    VDN,
)
from .numtheory import digit, least_power_above, or_plus_one_valuation, v2

CERT_DELETE_NIM = "deleteNim-even"
CERT_VDN = "vdn-odd"
CERT_ABO = "abo-star"
CERT_NMTH_EVEN = "nmth-even-all-odd"
CERT_NMTH_ODD = "nmth-odd-equal-v2"
CERT_KFRAC_A = "kfrac-a"
CERT_KFRAC_B = "kfrac-b"
CERT_KFRAC_AB = "kfrac-ab"
CERT_SINGLE3 = "single3-equal-v2"

_SINGLE4_SUBS = {2: ("2A",), 3: ("3A", "3B", "3C"),
                 4: ("4A", "4B", "4C", "4D", "4E"),
                 5: ("5A", "5B", "5C", "5D", "5E", "5F")}

CONDITION_IDS: frozenset[str] = frozenset(
    {CERT_DELETE_NIM, CERT_VDN, CERT_ABO, CERT_NMTH_EVEN, CERT_NMTH_ODD,
     CERT_KFRAC_A, CERT_KFRAC_B, CERT_KFRAC_AB, CERT_SINGLE3}
    | {f"single4-case{i}" for i in range(1, 6)}
    | {f"single4-case{i}-{sub}" for i, subs in _SINGLE4_SUBS.items() for sub in subs}
)

# Outcome objects are immutable and drawn from a finite set; intern them so
# the sweep-scale call volume does not allocate.
_CACHE: dict[tuple[PN, str], Outcome] = {}


def _out(pn: PN, certificate: str) -> Outcome:
    key = (pn, certificate)
    cached = _CACHE.get(key)
    if cached is None:
        cached = _CACHE[key] = Outcome(pn, certificate)
    return cached


def delete_nim_grundy(x: int, y: int) -> int:
    """Grundy value of the DeleteNim position <x,y>: v2((x|y)+1)."""
    return or_plus_one_valuation(x, y)


def classify_heaps(ruleset: Ruleset, heaps: Sequence[int]) -> Outcome:
    """Classify a canonical (sorted) heap tuple without Position wrapping.

    This is the lean kernel behind ``classify``; sweeps and soundness
    checks call it on millions of successor tuples.
    """
    match ruleset:
        case DeleteNim():
            if heaps[0] % 2 == 0 and heaps[1] % 2 == 0:
                return _out(PN.P, CERT_DELETE_NIM)
            return _out(PN.N, CERT_DELETE_NIM)
        case VDN():
            return _vdn(heaps)
        case ABO(n=n):
            period = n * (n - 1)
            if all(1 <= h % period <= n - 1 for h in heaps):
                return _out(PN.P, CERT_ABO)
            return _out(PN.N, CERT_ABO)
        case NMTH(n=n):
            return _nmth(n, heaps)
        case Half(m=m):
            return _kfrac(2, m, heaps)
        case KFrac(k=k, m=m):
            return _kfrac(k, m, heaps)
        case Single(n=n):
            if n == 2:
                return _vdn(heaps)
            if n == 3:
                return _equal_v2(heaps, CERT_SINGLE3)
            if n == 4:
                return _single4(heaps)
            raise Unsupported(
                f"single-delete with {n} heaps has no known characterization"
            )
    raise TypeError(f"unknown ruleset {ruleset!r}")


def classify(ruleset: Ruleset, p: Position) -> Outcome:
    """Outcome of a canonical position by closed form (no search)."""
    return classify_heaps(ruleset, p.heaps)


def is_p_position(ruleset: Ruleset, heaps: Sequence[int]) -> bool:
    return classify_heaps(ruleset, heaps).pn is PN.P


def _vdn(heaps: Sequence[int]) -> Outcome:
    if heaps[0] % 2 == 1 and heaps[1] % 2 == 1:
        return _out(PN.P, CERT_VDN)
    return _out(PN.N, CERT_VDN)


def _equal_v2(heaps: Sequence[int], cert: str) -> Outcome:
    first = v2(heaps[0])
    if all(v2(h) == first for h in heaps[1:]):
        return _out(PN.P, cert)
    return _out(PN.N, cert)


def _nmth(n: int, heaps: Sequence[int]) -> Outcome:
    if n % 2 == 0:
        if all(h % 2 == 1 for h in heaps):
            return _out(PN.P, CERT_NMTH_EVEN)
        return _out(PN.N, CERT_NMTH_EVEN)
    return _equal_v2(heaps, CERT_NMTH_ODD)


def _kfrac(k: int, m: int, heaps: Sequence[int]) -> Outcome:
    """Conditions (a) and (b) on the sorted heaps; see module docstring."""
    period = k * (k - 1)
    t = (k - 1) * m + 1  # count of heaps condition (a) constrains
    for h in heaps[:t]:
        if not 1 <= h % period <= k - 1:
            return _out(PN.N, CERT_KFRAC_A)
    bound = k ** least_power_above(k, heaps[t - 1])
    for h in heaps[t:]:
        if not 1 <= h % period <= k - 1 and h < bound:
            return _out(PN.N, CERT_KFRAC_B)
    return _out(PN.P, CERT_KFRAC_AB)


def _single4(heaps: Sequence[int]) -> Outcome:
    # Order heaps by (valuation, size, original index); the class is
    # independent of how ties among equal valuations are broken.
    ordered = tuple(sorted(heaps, key=lambda h: (v2(h), h)))
    case, violated = _single4_eval(ordered)
    if case is not None:
        return _out(PN.P, f"single4-case{case}")
    return _out(PN.N, violated)


def _single4_eval(ordered: tuple[int, int, int, int]) -> tuple[int | None, str | None]:
    """Evaluate the five-case Single(4) characterization.

    ``ordered`` = (w, x, y, z) sorted by non-decreasing 2-adic valuation.
    Returns (matched case number, None) for P, else (None, violated label).
    Cases, with a = v2(w) <= b = v2(x) <= c = v2(y) <= d = v2(z); digit(h, i)
    is the i-th binary digit from the bottom:

    1. a = b = c = d.
    2. a < b = c = d and (2A) digit(w, d+1) = 0.
    3. a < b < c = d and (3A) digit(w, d+1) = digit(x, d+1) = 0,
       (3B) digit(w, i) + digit(x, i) >= 1 for b+2 <= i <= d,
       (3C) digit(w, b+1) = 1.
    4. a < b < c < d and (4A) digit of w, x, y at d+1 all 0,
       (4B) digit(w,i)+digit(x,i)+digit(y,i) >= 2 for c+2 <= i <= d,
       (4C) digit(w, c+1) = digit(x, c+1) = 1,
       (4D) digit(w,i)+digit(x,i) >= 1 for b+2 <= i <= c,
       (4E) digit(w, b+1) = 1.
    5. a < b < c < d and (5A) the digit sum over all four heaps is 0, 3 or
       4 at every index i >= d+2, (5B) digit of w, x, y at d+1 all 1, and
       (5C)-(5F) equal to (4B)-(4E).

    N positions are labeled with the first violated sub-condition of the
    case their digits select: the valuation pattern picks the case, and
    for the a < b < c < d pattern the d+1 digits of w, x, y pick between
    case 4 (all 0) and case 5 (all 1); mixed digits violate case 4's (4A).
    Positions whose valuation pattern matches no case carry single4-case1,
    the first condition overall.
    """
    w, x, y, z = ordered
    a, b, c, d = v2(w), v2(x), v2(y), v2(z)
    if a == b == c == d:
        return 1, None
    if a < b and b == c == d:
        if digit(w, d + 1) == 0:
            return 2, None
        return None, "single4-case2-2A"
    if a < b < c and c == d:
        if digit(w, d + 1) != 0 or digit(x, d + 1) != 0:
            return None, "single4-case3-3A"
        if any(digit(w, i) + digit(x, i) < 1 for i in range(b + 2, d + 1)):
            return None, "single4-case3-3B"
        if digit(w, b + 1) != 1:
            return None, "single4-case3-3C"
        return 3, None
    if a < b < c < d:
        top_digits = {digit(h, d + 1) for h in (w, x, y)}
        if top_digits == {0}:
            fail = _single4_tail(w, x, y, b, c, d)
            if fail is None:
                return 4, None
            return None, "single4-case4-4" + fail
        if top_digits == {1}:
            top = max(h.bit_length() for h in ordered)
            if any(
                digit(w, i) + digit(x, i) + digit(y, i) + digit(z, i) not in (0, 3, 4)
                for i in range(d + 2, top + 1)
            ):
                return None, "single4-case5-5A"
            fail = _single4_tail(w, x, y, b, c, d)
            if fail is None:
                return 5, None
            # Case 5's shared checks sit one label later than case 4's.
            return None, "single4-case5-5" + "CDEF"["BCDE".index(fail)]
        return None, "single4-case4-4A"
    return None, "single4-case1"


def _single4_tail(w: int, x: int, y: int, b: int, c: int, d: int) -> str | None:
    """Sub-conditions shared by cases 4 and 5, labeled as case 4's 4B-4E.

    Returns the first violated label letter, or None when all hold.
    """
    if any(digit(w, i) + digit(x, i) + digit(y, i) < 2 for i in range(c + 2, d + 1)):
        return "B"
    if digit(w, c + 1) != 1 or digit(x, c + 1) != 1:
        return "C"
    if any(digit(w, i) + digit(x, i) < 1 for i in range(b + 2, c + 1)):
        return "D"
    if digit(w, b + 1) != 1:
        return "E"
    return None
