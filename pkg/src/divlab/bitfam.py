"""Bitmask set families and their degree / diversity statistics.

A subset of the ground set [n] = {1, ..., n} is a machine word: element i
sits at bit i-1, so n is capped at 63 and every set operation is a single
word instruction.  A Family is a sorted, duplicate-free collection of such
masks, optionally k-uniform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import ResourceCapError

MAX_GROUND = 63

# Above this size the O(|F|^2) pairwise scan is refused; use the dense
# up-set machinery in booleanlab instead.
PAIRWISE_CHECK_CAP = 1 << 16


def mask_from_elements(elements: Iterable[int], n: int) -> int:
    """Pack 1-based elements of [n] into a bitmask."""
    mask = 0
    for e in elements:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside ground set [1, {n}]")
        mask |= 1 << (e - 1)
    return mask


def elements_of_mask(mask: int) -> tuple[int, ...]:
    """Unpack a bitmask into an ascending tuple of 1-based elements."""
    out = []
    m = int(mask)
    while m:
        low = m & -m
        out.append(low.bit_length())
        m ^= low
    return tuple(out)


@dataclass(eq=False)
class Family:
    """A canonical family of subsets of [n].

    ``members`` is an ascending, duplicate-free int64 array of masks and is
    treated as immutable.  ``k`` is the uniformity (None for non-uniform
    families).
    """

    n: int
    k: Optional[int]
    members: np.ndarray

    def __post_init__(self) -> None:
        self.members = np.asarray(self.members, dtype=np.int64)
        self.members.setflags(write=False)

    def __len__(self) -> int:
        return int(self.members.size)

    def __iter__(self) -> Iterator[int]:
        return (int(m) for m in self.members)

    def __contains__(self, mask: int) -> bool:
        i = int(np.searchsorted(self.members, mask))
        return i < len(self) and int(self.members[i]) == int(mask)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return (
            self.n == other.n
            and self.k == other.k
            and self.members.shape == other.members.shape
            and bool(np.all(self.members == other.members))
        )

    def member_sets(self) -> list[tuple[int, ...]]:
        """Members as ascending element tuples (small families only)."""
        return [elements_of_mask(m) for m in self.members]

    def __repr__(self) -> str:
        return f"Family(n={self.n}, k={self.k}, size={len(self)})"


@dataclass(frozen=True)
class FamilyStats:
    """Size, per-element degrees, max degree and diversity of a family."""

    size: int
    degrees: tuple[int, ...]
    max_degree: int
    max_degree_element: Optional[int]
    diversity: int


def family_from_masks(
    n: int,
    k: Optional[int],
    masks: Iterable[int] | np.ndarray,
    *,
    presorted: bool = False,
) -> Family:
    """Build a canonical Family from raw masks, validating the invariants.

    ``presorted`` skips the sort/dedup for inputs already ascending and
    unique (large generated families).
    """
    if not 1 <= n <= MAX_GROUND:
        raise ValueError(f"ground set size {n} outside [1, {MAX_GROUND}]")
    arr = np.asarray(masks if isinstance(masks, np.ndarray) else list(masks), dtype=np.int64)
    if arr.size and (int(arr.min()) < 0 or int(arr.max()) >> n):
        raise ValueError(f"mask with bits outside ground set [1, {n}]")
    if not presorted:
        arr = np.unique(arr)
    if k is not None:
        if not 0 <= k <= n:
            raise ValueError(f"uniformity k={k} outside [0, {n}]")
        if arr.size and not bool(np.all(np.bitwise_count(arr.astype(np.uint64)) == k)):
            raise ValueError(f"member with cardinality != k={k}")
    return Family(n=n, k=k, members=arr)


def make_family(n: int, k: Optional[int], sets: Iterable[Iterable[int]]) -> Family:
    """Canonical Family from element lists (sorted, deduplicated).

    Raises ValueError for elements outside [1, n], a set whose cardinality
    differs from k (when k is given), or n outside the supported range.
    """
    if not 1 <= n <= MAX_GROUND:
        raise ValueError(f"ground set size {n} outside [1, {MAX_GROUND}]")
    masks = []
    for s in sets:
        mask = mask_from_elements(s, n)
        if k is not None and mask.bit_count() != k:
            raise ValueError(
                f"set {sorted(elements_of_mask(mask))} has cardinality {mask.bit_count()}, expected k={k}"
            )
        masks.append(mask)
    return family_from_masks(n, k, masks)


def is_t_intersecting(fam: Family, t: int = 1) -> bool:
    """True iff every pair of distinct members shares at least t elements.

    Empty and singleton families are vacuously t-intersecting.  Refuses
    families above PAIRWISE_CHECK_CAP members; the dense up-set check in
    booleanlab covers those.
    """
    if t < 1:
        raise ValueError(f"threshold t={t} must be >= 1")
    m = len(fam)
    if m > PAIRWISE_CHECK_CAP:
        raise ResourceCapError(
            f"pairwise scan refused for {m} > {PAIRWISE_CHECK_CAP} members; "
            "use booleanlab.is_intersecting_table on the dense representation"
        )
    if m < 2:
        return True
    members = fam.members
    for i in range(m - 1):
        common = np.bitwise_count((members[i] & members[i + 1 :]).astype(np.uint64))
        if int(common.min()) < t:
            return False
    return True


def are_cross_intersecting(a: Family, b: Family) -> bool:
    """True iff every member of ``a`` intersects every member of ``b``.

    Vacuously true when either family is empty.
    """
    if a.n != b.n:
        raise ValueError(f"mismatched ground sets: {a.n} != {b.n}")
    if len(a) == 0 or len(b) == 0:
        return True
    small, large = (a.members, b.members) if len(a) <= len(b) else (b.members, a.members)
    for m in small:
        if bool(np.any((large & m) == 0)):
            return False
    return True


def stats(fam: Family) -> FamilyStats:
    """Degrees, max degree (smallest element on ties) and diversity."""
    size = len(fam)
    if size == 0:
        return FamilyStats(
            size=0,
            degrees=tuple(0 for _ in range(fam.n)),
            max_degree=0,
            max_degree_element=None,
            diversity=0,
        )
    degrees = tuple(
        int(np.count_nonzero(fam.members & (1 << i))) for i in range(fam.n)
    )
    max_degree = max(degrees)
    max_elt = degrees.index(max_degree) + 1
    return FamilyStats(
        size=size,
        degrees=degrees,
        max_degree=max_degree,
        max_degree_element=max_elt,
        diversity=size - max_degree,
    )


def diversity(fam: Family) -> int:
    return stats(fam).diversity


def family_to_text(fam: Family) -> str:
    """Serialize in the family text format.

    First line ``n=<n> k=<k|->``, then one set per line as comma-separated
    ascending elements; the empty set is the line ``-`` (a blank line would
    be skipped on parse).  Round-trips bit-exactly through family_from_text.
    """
    lines = [f"n={fam.n} k={fam.k if fam.k is not None else '-'}"]
    for m in fam.members:
        lines.append(",".join(str(e) for e in elements_of_mask(m)) or "-")
    return "\n".join(lines) + "\n"


def family_from_text(text: str) -> Family:
    """Parse the family text format; blank lines and ``#`` comments ignored."""
    header = None
    sets: list[list[int]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = dict(p.split("=", 1) for p in line.split())
            if "n" not in parts or "k" not in parts:
                raise ValueError(f"bad family header: {raw!r}")
            header = (int(parts["n"]), None if parts["k"] == "-" else int(parts["k"]))
            continue
        if line == "-":
            sets.append([])
            continue
        sets.append([int(x) for x in line.split(",") if x])
    if header is None:
        raise ValueError("family text has no header line")
    n, k = header
    return make_family(n, k, sets)


def load_family(path) -> Family:
    with open(path, "r", encoding="utf-8") as fh:
        return family_from_text(fh.read())


def save_family(fam: Family, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(family_to_text(fam))
