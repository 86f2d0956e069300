"""Compression machinery: (i,j)-shifts and the lexicographic order on k-sets.

The lex order used here puts A before B iff min(A \\ B) < min(B \\ A); the
initial segment of that order on k-sets therefore starts at {1,...,k}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, islice

import numpy as np

from .bitfam import Family, family_from_masks


def shift_set(mask: int, i: int, j: int) -> int:
    """Replace j by i in the set when i is absent and j present."""
    ibit, jbit = 1 << (i - 1), 1 << (j - 1)
    if mask & ibit or not mask & jbit:
        return mask
    return (mask ^ jbit) | ibit


def shift_family(fam: Family, i: int, j: int) -> Family:
    """The (i,j)-shift: move each member unless its image is already present.

    Preserves size and uniformity; preserves the intersecting property.
    """
    if not 1 <= i < j <= fam.n:
        raise ValueError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={fam.n}")
    members = fam.members
    if len(members) == 0:
        return fam
    ibit, jbit = np.int64(1 << (i - 1)), np.int64(1 << (j - 1))
    movable = ((members & jbit) != 0) & ((members & ibit) == 0)
    images = (members ^ jbit) | ibit
    pos = np.searchsorted(members, images).clip(max=len(members) - 1)
    image_in_fam = members[pos] == images
    moved = np.where(movable & ~image_in_fam, images, members)
    out = family_from_masks(fam.n, fam.k, moved)
    assert len(out) == len(fam), "shift must preserve family size"
    return out


def is_shifted(fam: Family) -> bool:
    """True iff every (i,j)-shift fixes the family."""
    for j in range(2, fam.n + 1):
        for i in range(1, j):
            if shift_family(fam, i, j) != fam:
                return False
    return True


def shift_closure(fam: Family) -> Family:
    """Apply shifts in lex pair order, restarting after any change, to a fixed point.

    Terminates because each effective shift strictly decreases the element sum.
    The fixed point depends on the sweep order; the lex sweep makes it
    reproducible.
    """
    current = fam
    changed = True
    while changed:
        changed = False
        for i in range(1, current.n):
            for j in range(i + 1, current.n + 1):
                nxt = shift_family(current, i, j)
                if nxt != current:
                    current = nxt
                    changed = True
                    break
            if changed:
                break
    return current


def lex_compare(a: int, b: int) -> int:
    """-1 if a precedes b in lex order (min of the symmetric difference is in a),
    1 if b precedes a, 0 if equal.  Requires equal cardinality."""
    if int(a).bit_count() != int(b).bit_count():
        raise ValueError("lex order compares sets of equal cardinality")
    if a == b:
        return 0
    low = (a ^ b) & -(a ^ b)
    return -1 if a & low else 1


@dataclass(eq=False)
class LexSegment:
    """The first m_sets k-sets of [n] in lex order."""

    m_sets: int
    k: int
    n: int
    realized: Family


def _lex_masks(n: int, k: int):
    """Masks of k-sets of [n] in lex order."""
    for combo in combinations(range(n), k):
        m = 0
        for e in combo:
            m |= 1 << e
        yield m


def lex_segment(m: int, k: int, n: int) -> LexSegment:
    """Initial segment of the lex order on k-sets of [n]."""
    if not 0 <= m <= math.comb(n, k):
        raise ValueError(f"segment size {m} outside [0, C({n},{k})]")
    masks = list(islice(_lex_masks(n, k), m))
    return LexSegment(m_sets=m, k=k, n=n, realized=family_from_masks(n, k, masks))


def lex_partner_max(b_size: int, a: int, b: int, m: int) -> int:
    """Longest lex prefix of a-sets of [m] whose members all meet the first
    b_size b-sets in lex order.

    Scans the a-sets in lex order and stops at the first violator.
    """
    if not 1 <= a <= m or not 1 <= b <= m:
        raise ValueError(f"need 1 <= a,b <= m, got a={a}, b={b}, m={m}")
    if not 0 <= b_size <= math.comb(m, b):
        raise ValueError(f"partner size {b_size} outside [0, C({m},{b})]")
    if b_size == 0:
        return math.comb(m, a)
    b_masks = np.fromiter(islice(_lex_masks(m, b), b_size), dtype=np.int64, count=b_size)
    count = 0
    for mask in _lex_masks(m, a):
        if bool(np.any((b_masks & mask) == 0)):
            break
        count += 1
    return count
