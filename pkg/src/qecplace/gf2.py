"""Dense linear algebra over GF(2), backed by uint8 numpy arrays."""

from __future__ import annotations

import numpy as np


def as_gf2(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.uint8) & 1
    if m.ndim != 2:
        m = np.atleast_2d(m)
    return m


def matmul(a, b) -> np.ndarray:
    """Matrix product mod 2."""
    return (as_gf2(a).astype(np.int64) @ as_gf2(b).astype(np.int64) % 2).astype(np.uint8)


def rref(a) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    m = as_gf2(a).copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        # clear every other 1 in this column
        others = np.nonzero(m[:, c])[0]
        for o in others:
            if o != r:
                m[o] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a) -> int:
    return len(rref(a)[1])


def nullspace(a) -> np.ndarray:
    """Basis of the right nullspace, one vector per row."""
    m = as_gf2(a)
    _, cols = m.shape
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            if red[r, fc]:
                basis[i, pc] = 1
    return basis


def row_space_reduce(vec: np.ndarray, basis_rref: np.ndarray, pivots: list[int]) -> np.ndarray:
    """Reduce vec modulo a row space given in RREF with known pivots."""
    v = vec.copy()
    for r, c in enumerate(pivots):
        if v[c]:
            v ^= basis_rref[r]
    return v


def in_row_space(vec: np.ndarray, basis_rref: np.ndarray, pivots: list[int]) -> bool:
    return not row_space_reduce(vec, basis_rref, pivots).any()
