import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divlab.bitfam import family_from_masks, is_t_intersecting, make_family, stats
from divlab.constructions import fano_plane, star
from divlab.shiftlex import (
    is_shifted,
    lex_compare,
    lex_partner_max,
    lex_segment,
    shift_closure,
    shift_family,
    shift_set,
)

from conftest import small_intersecting_families
from oracles import family_as_sets, lex_sorted_ksets


def test_shift_set_cases():
    assert shift_set(0b110, 1, 2) == 0b101  # {2,3} -> {1,3}
    assert shift_set(0b101, 1, 2) == 0b101  # j absent: fixed
    assert shift_set(0b011, 1, 2) == 0b011  # i present: fixed


def test_shift_family_moves_free_image():
    fam = make_family(3, 2, [{2, 3}])
    assert shift_family(fam, 1, 2) == make_family(3, 2, [{1, 3}])


def test_shift_family_keeps_blocked_image():
    fam = make_family(3, 2, [{1, 3}, {2, 3}])
    assert shift_family(fam, 1, 2) == fam  # image {1,3} already present


def test_shift_family_fano():
    out = shift_family(fano_plane(), 1, 2)
    assert len(out) == 7
    assert is_t_intersecting(out, 1)


def test_shift_family_rejects_bad_pair():
    with pytest.raises(ValueError):
        shift_family(fano_plane(), 2, 2)
    with pytest.raises(ValueError):
        shift_family(fano_plane(), 3, 1)


def test_shift_closure_single_pair():
    assert shift_closure(make_family(3, 2, [{2, 3}])) == make_family(3, 2, [{1, 2}])


def test_shift_closure_star_fixed():
    fam = star(6, 3)
    assert shift_closure(fam) == fam
    assert is_shifted(fam)


def test_is_shifted_negative():
    assert not is_shifted(make_family(3, 2, [{2, 3}]))


@given(small_intersecting_families())
@settings(max_examples=60, deadline=None)
def test_shift_closure_properties(fam):
    closed = shift_closure(fam)
    assert len(closed) == len(fam)
    assert closed.k == fam.k
    assert is_shifted(closed)
    assert is_t_intersecting(closed, 1)
    st_ = stats(closed)
    # for a shifted family element 1 attains the maximum degree
    assert st_.degrees[0] == st_.max_degree if len(closed) else True
    avoiding = family_from_masks(
        closed.n, closed.k, [m for m in closed if not m & 1]
    )
    assert is_t_intersecting(avoiding, 2)


@given(small_intersecting_families(), st.integers(1, 8), st.integers(2, 9))
@settings(max_examples=80, deadline=None)
def test_shift_preserves_size_and_intersecting(fam, i, j):
    if not (1 <= i < j <= fam.n):
        return
    out = shift_family(fam, i, j)
    assert len(out) == len(fam)
    assert out.k == fam.k
    assert is_t_intersecting(out, 1)


def test_lex_compare_examples():
    assert lex_compare(0b1001, 0b0110) == -1  # {1,4} before {2,3}
    assert lex_compare(0b0011, 0b0101) == -1  # {1,2} before {1,3}
    assert lex_compare(0b0101, 0b0101) == 0
    with pytest.raises(ValueError):
        lex_compare(0b1, 0b11)


def test_lex_sort_of_pairs_on_5():
    import functools

    masks = [m for m in range(1 << 5) if bin(m).count("1") == 2]
    ordered = sorted(masks, key=functools.cmp_to_key(lex_compare))
    got = [tuple(sorted(i + 1 for i in range(5) if m >> i & 1)) for m in ordered]
    assert got == [tuple(sorted(s)) for s in lex_sorted_ksets(5, 2)]


@pytest.mark.parametrize("n,k", [(5, 2), (6, 3), (7, 3)])
def test_lex_segment_star_prefix(n, k):
    seg = lex_segment(math.comb(n - 1, k - 1), k, n)
    assert seg.realized == star(n, k)


def test_lex_segment_all_contain_leading_pair():
    seg = lex_segment(8, 3, 10)
    assert all({1, 2} <= set(s) for s in seg.realized.member_sets())
    assert len(seg.realized) == 8


def test_lex_segment_matches_sorted_oracle():
    seg = lex_segment(6, 3, 6)
    assert [set(s) for s in sorted(seg.realized.member_sets())] == sorted(
        [set(s) for s in lex_sorted_ksets(6, 3)[:6]]
    )


def test_lex_segment_edges():
    assert len(lex_segment(0, 3, 7).realized) == 0
    with pytest.raises(ValueError):
        lex_segment(36, 3, 7)  # beyond C(7,3)


def test_lex_segment_ones_form_prefix():
    seg = lex_segment(30, 3, 8)
    ordered = sorted(seg.realized.member_sets())  # tuple order = lex order
    flags = [1 in set(s) for s in ordered]
    assert flags == sorted(flags, reverse=True)


def test_lex_partner_max_example():
    assert lex_partner_max(8, 2, 3, 10) == 17  # pairs through 1 or 2


def test_lex_partner_max_vacuous():
    assert lex_partner_max(0, 2, 3, 10) == math.comb(10, 2)


def test_lex_partner_max_full_partner():
    # with every b-set present and a+b <= m no a-set can meet them all
    assert lex_partner_max(math.comb(7, 3), 2, 3, 7) == 0


def test_lex_partner_max_is_prefix_scan():
    # the scan result is the longest valid prefix: prefix members all meet
    # the partner segment, and the next one fails
    b_size, a, b, m = 5, 2, 3, 8
    count = lex_partner_max(b_size, a, b, m)
    a_sets = lex_sorted_ksets(m, a)
    b_sets = lex_sorted_ksets(m, b)[:b_size]
    assert all(s & t for s in a_sets[:count] for t in b_sets)
    assert count == len(a_sets) or any(not (a_sets[count] & t) for t in b_sets)


def test_lex_partner_max_rejects_oversize():
    with pytest.raises(ValueError):
        lex_partner_max(math.comb(10, 3) + 1, 2, 3, 10)
