"""Partition arithmetic checked against independent oracles."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcengine.orbits import (OrbitError, centralizer_dim_oracle,
                             dominance_cmp, fmt_partition, gk_dim,
                             jordan_matrix, normalize_partition, orbit_dim,
                             ordered_cmp, parse_partition, partitions,
                             same_up_to_ones, strip_ones, transpose)

ALL_PARTITIONS = [p for n in range(1, 9) for p in partitions(n)]
partition_st = st.sampled_from(ALL_PARTITIONS)


def dense_rank(entries, n):
    # plain Gaussian elimination over Q, written here so the rank used
    # by the oracles is cross-checked by a second implementation
    m = [[Fraction(entries.get((i, j), 0)) for j in range(1, n + 1)]
         for i in range(1, n + 1)]
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, n) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(n):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def matpow_entries(entries, n, k):
    cur = {(i, i): Fraction(1) for i in range(1, n + 1)}
    for _ in range(k):
        nxt = {}
        for (i, j), v in cur.items():
            for (a, b), w in entries.items():
                if a == j:
                    nxt[(i, b)] = nxt.get((i, b), 0) + v * w
        cur = {k2: v for k2, v in nxt.items() if v}
    return cur


def test_normalize_sorts_and_validates():
    assert normalize_partition([1, 3, 2]) == (3, 2, 1)
    assert normalize_partition((2, 2)) == (2, 2)
    with pytest.raises(OrbitError):
        normalize_partition((3, 0))
    with pytest.raises(OrbitError):
        normalize_partition((-1,))


def test_transpose_known_values():
    assert transpose((4, 2, 1)) == (3, 2, 1, 1)
    assert transpose((3, 3)) == (2, 2, 2)
    assert transpose((5,)) == (1, 1, 1, 1, 1)
    assert transpose((1, 1, 1)) == (3,)


@given(partition_st)
def test_transpose_is_an_involution(p):
    assert transpose(transpose(p)) == p
    assert sum(transpose(p)) == sum(p)


def test_dominance_extremes_and_classic_incomparable():
    assert dominance_cmp((4,), (2, 2)) == "greater"
    assert dominance_cmp((1, 1, 1, 1), (2, 2)) == "less"
    assert dominance_cmp((3, 3), (4, 1, 1)) == "incomparable"
    assert dominance_cmp((2, 1), (2, 1)) == "equal"
    assert dominance_cmp((3,), (2, 2)) == "incomparable"  # different sizes


@given(partition_st, partition_st)
def test_dominance_antisymmetric_and_graded_by_dimension(a, b):
    c = dominance_cmp(a, b)
    flipped = {"less": "greater", "greater": "less"}.get(c, c)
    assert dominance_cmp(b, a) == flipped
    if c == "less":
        assert orbit_dim(a) < orbit_dim(b)
        assert gk_dim(a) < gk_dim(b)


@given(partition_st)
def test_transpose_reverses_dominance(p):
    for q in partitions(sum(p)):
        c = dominance_cmp(p, q)
        flipped = {"less": "greater", "greater": "less"}.get(c, c)
        assert dominance_cmp(transpose(p), transpose(q)) == flipped


def test_orbit_dim_known_values():
    assert orbit_dim((1, 1, 1)) == 0
    assert orbit_dim((4,)) == 12  # regular orbit: n^2 - n
    assert orbit_dim((3, 1)) == 10
    assert gk_dim((3, 1)) == 5
    assert gk_dim((6, 1, 1, 1, 1)) == 35
    assert gk_dim((4, 4, 3)) == 45


@given(partition_st)
def test_gk_dim_is_half_the_orbit_dimension(p):
    assert orbit_dim(p) % 2 == 0
    assert gk_dim(p) * 2 == orbit_dim(p)


def test_partitions_count_and_order():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1),
                                   (1, 1, 1, 1)]
    counts = [sum(1 for _ in partitions(n)) for n in range(1, 9)]
    assert counts == [1, 2, 3, 5, 7, 11, 15, 22]


@settings(deadline=None)
@given(st.sampled_from([p for n in range(1, 8) for p in partitions(n)]))
def test_jordan_matrix_power_ranks_match_the_partition(p):
    # rank J^k = sum_i max(lambda_i - k, 0) characterizes the Jordan type
    n = sum(p)
    entries = jordan_matrix(p)
    for k in range(1, max(p) + 1):
        expected = sum(max(x - k, 0) for x in p)
        assert dense_rank(matpow_entries(entries, n, k), n) == expected


@settings(deadline=None, max_examples=30)
@given(st.sampled_from([p for n in range(1, 7) for p in partitions(n)]))
def test_centralizer_oracle_matches_the_transpose_formula(p):
    # dim Z(J_p) = sum of squares of the transpose parts
    assert centralizer_dim_oracle(p) == sum(x * x for x in transpose(p))


def test_fmt_and_parse_round_trip():
    assert fmt_partition((4, 1, 1)) == "(4,1^2)"
    assert fmt_partition((3, 3)) == "(3^2)"
    assert fmt_partition((5, 2, 1)) == "(5,2,1)"
    assert parse_partition("(6,1^4)") == (6, 1, 1, 1, 1)
    assert parse_partition("(4,4,3)") == (4, 4, 3)


@given(partition_st)
def test_parse_inverts_fmt(p):
    assert parse_partition(fmt_partition(p)) == p


def test_ones_helpers():
    assert strip_ones((4, 2, 1, 1)) == (4, 2)
    assert same_up_to_ones((4, 1, 2, 1), (4, 2, 1, 1))
    assert not same_up_to_ones((4, 2, 1), (4, 2))  # sums differ
    assert not same_up_to_ones((4, 2), (2, 4))
    # ordered classes compare through their unordered projections
    assert ordered_cmp((2, 3), (3, 2)) == "equal"
    assert ordered_cmp((1, 1, 4), (2, 2, 2)) == "greater"
