"""Dyadic valuations, binary digits, and the heap-splitting constructions.

The closed-form classifiers are built from two ingredients: the 2-adic
valuation of heap sizes, and a residue classification mod k(k-1).  Call
``z`` *k-oddoid* when z mod k(k-1) lies in 1..k-1, and *k-evenoid*
otherwise (for k = 2 these are exactly the odd and even numbers).  A
k-oddoid number can never be written as a sum of k k-oddoid parts; a
k-evenoid number always can, within controlled bounds.  The ``split_*``
functions below emit the explicit part lists the winning-move
constructions rely on.

Everything here is exact integer arithmetic; no tolerances anywhere.
"""

from __future__ import annotations


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


def v2(z: int) -> int:
    """2-adic valuation: the exponent of the largest power of 2 dividing z.

    Defined for positive integers only; v2 of zero would be infinite.
    """
    if z <= 0:
        raise DomainError(f"v2 requires z >= 1, got {z}")
    return (z & -z).bit_length() - 1


def digit(z: int, k: int) -> int:
    """The k-th binary digit of z counted from the bottom, 1-indexed:
    digit(z, 1) is the ones bit."""
    if z < 0:
        raise DomainError(f"digit requires z >= 0, got {z}")
    if k < 1:
        raise DomainError(f"digit index must be >= 1, got {k}")
    return (z >> (k - 1)) & 1


def or_plus_one_valuation(x: int, y: int) -> int:
    """v2((x | y) + 1) -- the Grundy value of the DeleteNim position <x,y>."""
    if x < 0 or y < 0:
        raise DomainError(f"heap sizes must be >= 0, got {x}, {y}")
    return v2((x | y) + 1)


def is_k_oddoid(z: int, k: int) -> bool:
    """True iff z mod k(k-1) lies in 1..k-1.  For k=2: z is odd."""
    if k < 2:
        raise DomainError(f"oddoid classification requires k >= 2, got {k}")
    if z <= 0:
        raise DomainError(f"oddoid classification requires z >= 1, got {z}")
    return 1 <= z % (k * (k - 1)) <= k - 1


def is_k_evenoid(z: int, k: int) -> bool:
    """Complement of is_k_oddoid on positive integers."""
    return not is_k_oddoid(z, k)


def least_power_above(base: int, bound: int) -> int:
    """Smallest exponent s with base**s > bound (bound >= 0)."""
    if base < 2:
        raise DomainError(f"base must be >= 2, got {base}")
    if bound < 0:
        raise DomainError(f"bound must be >= 0, got {bound}")
    s, power = 0, 1
    while power <= bound:
        power *= base
        s += 1
    return s


def split_equal_valuation(z: int, j: int) -> tuple[int, int]:
    """Split z into two parts that both have 2-adic valuation exactly j.

    Requires j < v2(z); returns (z - 2**j, 2**j).
    """
    if z <= 0:
        raise DomainError(f"split_equal_valuation requires z >= 1, got {z}")
    if j < 0:
        raise DomainError(f"valuation must be >= 0, got {j}")
    if j >= v2(z):
        raise DomainError(f"need j < v2(z); got j={j}, v2({z})={v2(z)}")
    return z - (1 << j), 1 << j


def split_small(x: int, k: int) -> tuple[int, ...]:
    """Split x with k <= x <= k(k-1) into k parts, each in 1..k-1.

    With x = k*p + q (0 <= q <= k-1): q copies of p+1 followed by k-q
    copies of p.  (When p = k-1, q is forced to 0 and all parts equal p.)
    """
    if k < 2:
        raise DomainError(f"split_small requires k >= 2, got {k}")
    if not k <= x <= k * (k - 1):
        raise DomainError(f"split_small requires {k} <= x <= {k * (k - 1)}, got {x}")
    p, q = divmod(x, k)
    return (p + 1,) * q + (p,) * (k - q)


def split_evenoid_bounded(y: int, k: int, s: int) -> tuple[int, ...]:
    """Split a k-evenoid y with k <= y < k**s into k k-oddoid parts, each
    strictly below k**(s-1).

    Construction: write y = alpha*k(k-1) + beta with k <= beta <= k(k-1)
    (forced: beta = y mod k(k-1) unless that remainder is 0, in which case
    beta = k(k-1) itself).  Split alpha into k near-equal parts (the first
    alpha mod k parts get the extra token) and beta via split_small; part i
    is alpha_i*k(k-1) + beta_i.  The output does not depend on s; s only
    gates the bound being promised.
    """
    if k < 2:
        raise DomainError(f"split_evenoid_bounded requires k >= 2, got {k}")
    if y < k:
        raise DomainError(f"split_evenoid_bounded requires y >= {k}, got {y}")
    if is_k_oddoid(y, k):
        raise DomainError(f"{y} is {k}-oddoid; only evenoid numbers split this way")
    if y >= k**s:
        raise DomainError(f"split_evenoid_bounded requires y < {k}**{s} = {k**s}, got {y}")
    kk = k * (k - 1)
    alpha, beta = divmod(y, kk)
    if beta < k:
        # An evenoid remainder below k can only be 0; borrow a full period.
        alpha, beta = alpha - 1, beta + kk
    base, extra = divmod(alpha, k)
    alpha_parts = (base + 1,) * extra + (base,) * (k - extra)
    beta_parts = split_small(beta, k)
    return tuple(a * kk + b for a, b in zip(alpha_parts, beta_parts))


def split_keep_tail(z: int, k: int) -> tuple[int, ...]:
    """Split z >= k into k parts: k-1 small parts in 1..k-1 plus one tail.

    A k-oddoid z yields k-1 ones and the tail z-(k-1).  A k-evenoid z is
    written alpha*k(k-1) + beta as in split_evenoid_bounded; the parts are
    beta_1..beta_{k-1} and the tail alpha*k(k-1) + beta_k, which is then
    k-oddoid.
    """
    if k < 2:
        raise DomainError(f"split_keep_tail requires k >= 2, got {k}")
    if z < k:
        raise DomainError(f"split_keep_tail requires z >= {k}, got {z}")
    if is_k_oddoid(z, k):
        return (1,) * (k - 1) + (z - (k - 1),)
    kk = k * (k - 1)
    alpha, beta = divmod(z, kk)
    if beta < k:
        alpha, beta = alpha - 1, beta + kk
    beta_parts = split_small(beta, k)
    return beta_parts[: k - 1] + (alpha * kk + beta_parts[k - 1],)
