import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divlab import booleanlab as bl
from divlab.bitfam import family_from_masks, is_t_intersecting, make_family, stats
from divlab.constructions import (
    JuntaSpec,
    build_dictator_defining,
    build_hub_block_family,
    build_majority_defining,
    build_run_dominance_defining,
    build_window_majority,
    fano_plane,
    full_uniform_family,
    lift_junta,
    star,
    triangle_decompose,
)
from divlab.errors import ResourceCapError

from oracles import all_ksets, family_as_sets, pascal_binom


def hub_block_oracle(n, k, u):
    """Literal filter: contains the whole block {2..u+1}, or 1 plus a block hit."""
    block = set(range(2, u + 2))
    return {
        s
        for s in all_ksets(n, k)
        if block <= s or (1 in s and s & block)
    }


def window_majority_oracle(n, k, r):
    window = set(range(1, 2 * r + 2))
    return {s for s in all_ksets(n, k) if len(s & window) >= r + 1}


@pytest.mark.parametrize("n,k,u", [(7, 3, 2), (8, 3, 2), (10, 4, 3), (10, 4, 4), (8, 4, 2)])
def test_hub_block_matches_filter_oracle(n, k, u):
    fam = build_hub_block_family(n, k, u)
    assert set(family_as_sets(fam)) == hub_block_oracle(n, k, u)


def test_hub_block_7_3_2():
    fam = build_hub_block_family(7, 3, 2)
    assert len(fam) == 13
    assert stats(fam).diversity == 4
    # same size as the u=3 variant at these parameters
    assert len(build_hub_block_family(7, 3, 3)) == 13


def test_hub_block_10_4_3_size():
    fam = build_hub_block_family(10, 4, 3)
    assert len(fam) == 70
    assert 70 == pascal_binom(9, 3) + pascal_binom(6, 1) - pascal_binom(6, 3)


def test_hub_block_boundary_u_equals_k():
    fam = build_hub_block_family(8, 4, 4)  # n = 2k
    assert is_t_intersecting(fam, 1)


@pytest.mark.parametrize("n,k,u", [(7, 3, 1), (7, 3, 4), (5, 3, 2)])
def test_hub_block_rejects_bad_parameters(n, k, u):
    with pytest.raises(ValueError):
        build_hub_block_family(n, k, u)


@pytest.mark.parametrize("n,k,r", [(7, 3, 1), (7, 3, 2), (5, 2, 1), (9, 4, 2), (10, 4, 3)])
def test_window_majority_matches_filter_oracle(n, k, r):
    fam = build_window_majority(n, k, r)
    assert set(family_as_sets(fam)) == window_majority_oracle(n, k, r)
    assert is_t_intersecting(fam, 1)


def test_window_majority_examples():
    assert build_window_majority(7, 3, 1) == build_hub_block_family(7, 3, 2)
    d2 = build_window_majority(7, 3, 2)
    assert set(family_as_sets(d2)) == set(all_ksets(5, 3))  # all 3-subsets of [5]
    assert len(d2) == 10 and stats(d2).diversity == 4
    assert build_window_majority(5, 2, 1) == make_family(5, 2, [{1, 2}, {1, 3}, {2, 3}])


def test_window_majority_rejects_bad_parameters():
    with pytest.raises(ValueError):
        build_window_majority(7, 3, 3)  # r > k-1
    with pytest.raises(ValueError):
        build_window_majority(4, 3, 2)  # window exceeds ground set


def test_run_dominance_r1_is_majority_on_3():
    spec = build_run_dominance_defining(1)
    assert [tuple(s) for s in spec.defining.member_sets()] == [
        (1, 2),
        (1, 3),
        (2, 3),
        (1, 2, 3),
    ]


@pytest.mark.parametrize("r", range(1, 7))
def test_run_dominance_count_and_structure(r):
    spec = build_run_dominance_defining(r)
    assert len(spec.defining) == 1 << (2 * r)
    assert bl.spec_is_intersecting(spec)
    assert bl.spec_is_up_closed(spec)


@pytest.mark.parametrize("r", range(1, 7))
def test_run_dominance_complement_exclusive(r):
    table = spec_table = build_run_dominance_defining(r).membership_table()
    full = len(table) - 1
    flipped = table[::-1]  # index m -> full - m = complement of m
    assert bool(np.all(table ^ flipped))  # exactly one of each complement pair


def test_run_dominance_majority_boundary():
    # coincides with majority up to window parameter 4, differs at 5
    for r in (1, 2, 3, 4):
        assert build_run_dominance_defining(r).defining == build_majority_defining(r).defining
    t5 = build_run_dominance_defining(5)
    assert t5.defining != build_majority_defining(5).defining
    witness = int("11110001000"[::-1], 2)  # ones-runs (4,1) beat zeros-runs (3,3)
    assert witness in t5.defining
    assert bin(witness).count("1") == 5  # below majority weight 6


def test_run_dominance_rejects_out_of_range():
    with pytest.raises(ValueError):
        build_run_dominance_defining(0)
    with pytest.raises(ValueError):
        build_run_dominance_defining(13)


def test_junta_spec_validation():
    with pytest.raises(ValueError, match="non-uniform"):
        JuntaSpec(3, family_from_masks(3, 2, [0b011]))
    with pytest.raises(ValueError, match="center"):
        JuntaSpec(4, family_from_masks(3, None, [0b011]))


def test_lift_majority_equals_window_majority():
    maj = build_majority_defining(1)
    assert lift_junta(maj, 7, 3) == build_window_majority(7, 3, 1)


def test_lift_empty_and_full():
    empty = JuntaSpec(3, family_from_masks(3, None, []))
    assert len(lift_junta(empty, 6, 3)) == 0
    all_traces = JuntaSpec(1, family_from_masks(1, None, [0, 1]))
    assert lift_junta(all_traces, 5, 2) == full_uniform_family(5, 2)


def test_lift_cap_refused():
    spec = build_majority_defining(1)
    with pytest.raises(ResourceCapError):
        lift_junta(spec, 40, 20)


def test_dictator_defining():
    spec = build_dictator_defining(4)
    assert len(spec.defining) == 1 << 3
    assert all(1 in s for s in spec.defining.member_sets())


def test_triangle_decompose_two_of_three():
    dec = triangle_decompose(build_hub_block_family(7, 3, 2))
    assert len(dec.f1) == len(dec.f2) == len(dec.f3) == 0
    assert len(dec.h2) == 0
    assert len(dec.g) == 4 == dec.gamma
    assert dec.chain_holds


def test_triangle_decompose_star_of_5():
    dec = triangle_decompose(star(7, 3, element=5))
    # members tracing {2,3} are exactly {2,3,5}; its tail {5} relabels to {2}
    assert dec.g.member_sets() == [(2,)]
    assert dec.largest_fi_index == 1  # all three trace classes tie at size 3
    assert len(dec.h1) == 3 and len(dec.h2) == 3
    assert dec.gamma == 0 and dec.chain_holds


def test_triangle_decompose_fano():
    dec = triangle_decompose(fano_plane())
    assert dec.gamma == 4
    assert dec.chain_bound == 4  # 0 + 2*2 + 0: the chain is tight here
    assert dec.chain_holds


def test_triangle_decompose_uniformities():
    dec = triangle_decompose(build_window_majority(9, 4, 2))
    assert dec.g.k == 2 and dec.h1.k == 3 and dec.h2.k == 4
    assert dec.g.n == dec.h1.n == dec.h2.n == 6
    assert len(dec.h1) == len(dec.fi[dec.largest_fi_index - 1])


def test_triangle_decompose_rejects_non_intersecting():
    fam = make_family(6, 3, [{1, 2, 3}, {4, 5, 6}])
    with pytest.raises(ValueError, match="intersecting"):
        triangle_decompose(fam)
    with pytest.raises(ValueError, match="k >= 2"):
        triangle_decompose(make_family(5, 1, [{1}]))


@given(st.integers(2, 5), st.integers(0, 2**20 - 1))
@settings(max_examples=60)
def test_lift_membership_rule(r, raw):
    # lifting preserves the defining rule trace-for-trace
    n, k = 2 * r + 2, r + 1
    spec = build_majority_defining(r)
    fam = lift_junta(spec, n, k)
    jmask = (1 << spec.center_size) - 1
    table = spec.membership_table()
    for m in fam:
        assert table[m & jmask]
