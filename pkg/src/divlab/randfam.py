"""Seeded generation of random intersecting families for sweeps and tests."""

from __future__ import annotations

import random
from itertools import combinations

from .bitfam import Family, family_from_masks


def random_intersecting_family(
    n: int, k: int, rng: random.Random, keep_prob: float = 0.7
) -> Family:
    """A random intersecting k-uniform family on [n].

    Greedily grows a maximal intersecting family along a shuffled candidate
    order, then keeps each member independently with ``keep_prob`` (always
    keeping at least one), so the output is intersecting but usually not
    maximal.
    """
    candidates = []
    for combo in combinations(range(n), k):
        m = 0
        for e in combo:
            m |= 1 << e
        candidates.append(m)
    rng.shuffle(candidates)
    kept: list[int] = []
    for mask in candidates:
        if all(mask & other for other in kept):
            kept.append(mask)
    members = [m for m in kept if rng.random() < keep_prob]
    if not members:
        members = [kept[0]]
    return family_from_masks(n, k, members)
