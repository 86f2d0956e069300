"""Builders for the named families and the decomposition around a 3-element center.

All builders return canonical Families.  Junta-style families (membership
determined by the intersection with a small center) are represented by a
JuntaSpec: the center size plus an explicit defining family over the center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from . import runstat
from .bitfam import Family, family_from_masks, is_t_intersecting, make_family, stats
from .errors import ResourceCapError

CENTER_CAP = 25
LIFT_CAP = 1 << 26


@dataclass(eq=False)
class JuntaSpec:
    """A family whose membership depends only on the trace inside a center.

    ``defining`` is the non-uniform family over [center_size] listing the
    admissible traces.
    """

    center_size: int
    defining: Family

    def __post_init__(self) -> None:
        if not 1 <= self.center_size <= CENTER_CAP:
            raise ValueError(f"center size {self.center_size} outside [1, {CENTER_CAP}]")
        if self.defining.n != self.center_size:
            raise ValueError("defining family must live on the center ground set")
        if self.defining.k is not None:
            raise ValueError("defining family must be non-uniform")

    def membership_table(self) -> np.ndarray:
        """Dense bool table over 2^center_size; entry m is True iff m is a trace."""
        table = np.zeros(1 << self.center_size, dtype=bool)
        table[self.defining.members] = True
        return table

    def __repr__(self) -> str:
        return f"JuntaSpec(center_size={self.center_size}, defining_size={len(self.defining)})"


def build_hub_block_family(n: int, k: int, u: int) -> Family:
    """k-sets that contain the whole block {2,...,u+1}, or contain element 1
    and meet the block.

    For u=2 this is the 'two out of three' family {F: |F cap [3]| >= 2}.
    """
    if not 2 <= u <= k:
        raise ValueError(f"need 2 <= u <= k, got u={u}, k={k}")
    if n < 2 * k:
        raise ValueError(f"need n >= 2k, got n={n}, k={k}")
    block = list(range(2, u + 2))
    block_mask = sum(1 << (e - 1) for e in block)
    rest = [e for e in range(1, n + 1) if e not in block]
    masks = []
    for extra in combinations(rest, k - u):
        masks.append(block_mask | sum(1 << (e - 1) for e in extra))
    for tail in combinations(range(2, n + 1), k - 1):
        m = 1 | sum(1 << (e - 1) for e in tail)
        if m & block_mask:
            masks.append(m)
    return family_from_masks(n, k, masks)


def build_window_majority(n: int, k: int, r: int) -> Family:
    """k-sets holding a strict majority (>= r+1 elements) of the window [1, 2r+1]."""
    if not 1 <= r <= k - 1:
        raise ValueError(f"need 1 <= r <= k-1, got r={r}, k={k}")
    w = 2 * r + 1
    if w > n:
        raise ValueError(f"window 2r+1={w} exceeds ground set n={n}")
    window = list(range(1, w + 1))
    rest = list(range(w + 1, n + 1))
    masks = []
    for i in range(r + 1, min(k, w) + 1):
        for inside in combinations(window, i):
            base = sum(1 << (e - 1) for e in inside)
            for outside in combinations(rest, k - i):
                masks.append(base | sum(1 << (e - 1) for e in outside))
    return family_from_masks(n, k, masks)


def build_run_dominance_defining(r: int) -> JuntaSpec:
    """Defining family of the cyclic run-dominance junta on a (2r+1)-circle.

    A subset of the circle belongs iff its descending ones-run profile
    lexicographically beats its zeros-run profile.  The defining family has
    exactly 2^(2r) members, is intersecting and is closed upward.
    """
    if not 1 <= r <= 12:
        raise ValueError(f"need 1 <= r <= 12, got r={r}")
    length = 2 * r + 1
    table = runstat.in_t_table(length)
    members = np.flatnonzero(table).astype(np.int64)
    defining = family_from_masks(length, None, members, presorted=True)
    return JuntaSpec(center_size=length, defining=defining)


def build_majority_defining(r: int) -> JuntaSpec:
    """Defining family of the window-majority junta: traces of size >= r+1."""
    if not 1 <= r <= 12:
        raise ValueError(f"need 1 <= r <= 12, got r={r}")
    length = 2 * r + 1
    masks = np.arange(1 << length, dtype=np.int64)
    members = masks[np.bitwise_count(masks.astype(np.uint64)) >= r + 1]
    defining = family_from_masks(length, None, members, presorted=True)
    return JuntaSpec(center_size=length, defining=defining)


def build_dictator_defining(center_size: int, element: int = 1) -> JuntaSpec:
    """Defining family of the dictator junta: traces containing one element."""
    bit = 1 << (element - 1)
    masks = np.arange(1 << center_size, dtype=np.int64)
    defining = family_from_masks(center_size, None, masks[(masks & bit) != 0], presorted=True)
    return JuntaSpec(center_size=center_size, defining=defining)


def lift_junta(spec: JuntaSpec, n: int, k: int) -> Family:
    """All k-sets of [n] whose trace on the center is a defining member."""
    if spec.center_size > n:
        raise ValueError(f"center size {spec.center_size} exceeds ground set {n}")
    if math.comb(n, k) > LIFT_CAP:
        raise ResourceCapError(f"lift of C({n},{k}) sets exceeds cap {LIFT_CAP}")
    table = spec.membership_table()
    jmask = (1 << spec.center_size) - 1
    masks = []
    for combo in combinations(range(n), k):
        m = 0
        for e in combo:
            m |= 1 << e
        if table[m & jmask]:
            masks.append(m)
    return family_from_masks(n, k, masks)


@dataclass(eq=False)
class TriangleDecomposition:
    """Split of a k-uniform intersecting family around the center {1,2,3}.

    ``fi[i]`` holds the members whose center trace is exactly {i}.  The
    largest of the three (ties to the smallest index) drives the bound:
    ``g`` collects the tails of members tracing the opposite pair, ``h1``
    the tails of the largest fi, ``h2`` the members avoiding the center.
    Tails are relabeled from [4, n] down to [1, n-3].
    """

    f1: Family
    f2: Family
    f3: Family
    g: Family
    h1: Family
    h2: Family
    largest_fi_index: int
    relabel_offset: int
    gamma: int
    chain_bound: int
    chain_holds: bool

    @property
    def fi(self) -> tuple[Family, Family, Family]:
        return (self.f1, self.f2, self.f3)


def triangle_decompose(fam: Family) -> TriangleDecomposition:
    """Decompose an intersecting k-uniform family around the center {1,2,3}.

    Records the diversity chain gamma <= |g| + 2|h1| + |h2|, which holds for
    every intersecting uniform family.
    """
    if fam.k is None or fam.k < 2:
        raise ValueError("decomposition needs a k-uniform family with k >= 2")
    if fam.n < 4:
        raise ValueError("decomposition needs ground set size >= 4")
    if not is_t_intersecting(fam, 1):
        raise ValueError("decomposition is defined for intersecting families only")
    traces = fam.members & 0b111
    fi_masks = [fam.members[traces == (1 << i)] for i in range(3)]
    sizes = [arr.size for arr in fi_masks]
    largest = max(range(3), key=lambda i: (sizes[i], -i))  # ties to smallest index
    pair_mask = 0b111 ^ (1 << largest)
    n_tail = fam.n - 3
    g = family_from_masks(n_tail, fam.k - 2, fam.members[traces == pair_mask] >> 3, presorted=True)
    h1 = family_from_masks(n_tail, fam.k - 1, fi_masks[largest] >> 3, presorted=True)
    h2 = family_from_masks(n_tail, fam.k, fam.members[traces == 0] >> 3, presorted=True)
    f1, f2, f3 = (
        family_from_masks(fam.n, fam.k, arr, presorted=True) for arr in fi_masks
    )
    gamma = stats(fam).diversity
    chain_bound = len(g) + 2 * len(h1) + len(h2)
    return TriangleDecomposition(
        f1=f1,
        f2=f2,
        f3=f3,
        g=g,
        h1=h1,
        h2=h2,
        largest_fi_index=largest + 1,
        relabel_offset=3,
        gamma=gamma,
        chain_bound=chain_bound,
        chain_holds=gamma <= chain_bound,
    )


def full_uniform_family(n: int, k: int) -> Family:
    """All k-subsets of [n]."""
    masks = []
    for combo in combinations(range(n), k):
        m = 0
        for e in combo:
            m |= 1 << e
        masks.append(m)
    return family_from_masks(n, k, masks)


def star(n: int, k: int, element: int = 1) -> Family:
    """All k-sets through a fixed element."""
    bit = 1 << (element - 1)
    rest = [e for e in range(1, n + 1) if e != element]
    masks = [bit | sum(1 << (e - 1) for e in tail) for tail in combinations(rest, k - 1)]
    return family_from_masks(n, k, masks)


def fano_plane() -> Family:
    """The seven lines of the projective plane of order 2, on ground set [7]."""
    lines = [
        (1, 2, 3),
        (1, 4, 5),
        (1, 6, 7),
        (2, 4, 6),
        (2, 5, 7),
        (3, 4, 7),
        (3, 5, 6),
    ]
    return make_family(7, 3, lines)
