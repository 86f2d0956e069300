import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from hypothesis import strategies as st

from divlab.bitfam import family_from_masks


@st.composite
def small_families(draw, max_n=10, uniform=None):
    """Random canonical families on a small ground set."""
    n = draw(st.integers(3, max_n))
    if uniform is None:
        uniform = draw(st.booleans())
    if uniform:
        k = draw(st.integers(1, max(1, n // 2)))
        universe = [m for m in range(1 << n) if bin(m).count("1") == k]
    else:
        k = None
        universe = list(range(1 << n))
    masks = draw(st.lists(st.sampled_from(universe), min_size=0, max_size=24))
    return family_from_masks(n, k, masks)


@st.composite
def small_intersecting_families(draw, max_n=9):
    """Random intersecting uniform families, built by greedy filtering."""
    n = draw(st.integers(4, max_n))
    k = draw(st.integers(2, max(2, n // 2)))
    universe = [m for m in range(1 << n) if bin(m).count("1") == k]
    picks = draw(st.lists(st.sampled_from(universe), min_size=1, max_size=20))
    kept = []
    for m in picks:
        if all(m & other for other in kept):
            kept.append(m)
    return family_from_masks(n, k, kept)
