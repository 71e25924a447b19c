import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qecplace.gf2 import (as_gf2, in_row_space, matmul, nullspace, rank,
                          rref, row_space_reduce)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(0, 1), min_size=c, max_size=c),
                min_size=r, max_size=r).map(np.array)))


def brute_rank(m):
    """Independent oracle: size of the spanned row space, by enumeration."""
    rows = [tuple(r % 2) for r in m]
    span = {tuple([0] * m.shape[1])}
    for choose in itertools.product([0, 1], repeat=len(rows)):
        acc = np.zeros(m.shape[1], dtype=int)
        for c, r in zip(choose, rows):
            if c:
                acc = (acc + np.array(r)) % 2
        span.add(tuple(acc))
    size = len(span)
    return int(np.log2(size))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_row_space_enumeration(m):
    assert rank(m) == brute_rank(m)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rref_is_idempotent(m):
    r1, p1 = rref(as_gf2(m))
    r2, p2 = rref(r1)
    assert np.array_equal(r1, r2)
    assert p1 == p2


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_nullspace_is_orthogonal_and_complete(m):
    ns = nullspace(m)
    if ns.size:
        assert not matmul(m, ns.T).any()
    assert rank(m) + ns.shape[0] == m.shape[1]


@settings(max_examples=80, deadline=None)
@given(matrices(max_rows=5, max_cols=5))
def test_row_space_membership(m):
    basis, pivots = rref(as_gf2(m))
    basis = basis[:len(pivots)]
    span = set()
    for choose in itertools.product([0, 1], repeat=m.shape[0]):
        acc = (np.array(choose) @ m) % 2
        span.add(tuple(int(v) for v in acc))
    for vec in itertools.product([0, 1], repeat=m.shape[1]):
        expected = vec in span
        got = in_row_space(np.array(vec, dtype=np.uint8), basis, pivots)
        assert got == expected


def test_matmul_is_mod2():
    a = np.array([[1, 1], [0, 1]], dtype=np.uint8)
    b = np.array([[1, 0], [1, 0]], dtype=np.uint8)
    assert np.array_equal(matmul(a, b), np.array([[0, 0], [1, 0]]))
