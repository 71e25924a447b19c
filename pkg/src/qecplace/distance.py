"""Code distance estimation: exhaustive for small kernels, randomized
information-set sampling otherwise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .codes import CssCode, CodeError


@dataclass(frozen=True)
class DistanceEstimate:
    value: int
    kind: str  # "exact" | "upper_bound"
    trials_used: int

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("distance must be >= 1")
        if self.kind not in ("exact", "upper_bound"):
            raise ValueError(f"bad kind {self.kind}")


def estimate_distance(code: CssCode, trial_budget: int = 1000,
                      exhaustive_threshold: int = 12, seed: int = 0) -> DistanceEstimate:
    """Minimum weight over X and Z logical operators.

    Exhaustive (kind "exact") when both kernel dimensions are at most
    exhaustive_threshold; otherwise randomized information-set sampling
    (kind "upper_bound"). The trial stream is prefix-deterministic in the
    seed, so a larger budget never returns a larger value.
    """
    if trial_budget < 1:
        raise ValueError("trial_budget must be >= 1")
    if code.k <= 0:
        raise CodeError("code has no logical operators (k = 0)")
    hx, hz = code.h_x.to_dense(), code.h_z.to_dense()
    dim_x = code.n - gf2.rank(hz)  # X logicals live in ker(H_Z)
    dim_z = code.n - gf2.rank(hx)
    if max(dim_x, dim_z) <= exhaustive_threshold:
        dx = _exact_side(hz, hx)
        dz = _exact_side(hx, hz)
        return DistanceEstimate(min(dx, dz), "exact", 0)
    rng = np.random.default_rng(seed)
    dx = _sampled_side(hz, hx, trial_budget, rng)
    dz = _sampled_side(hx, hz, trial_budget, rng)
    return DistanceEstimate(min(dx, dz), "upper_bound", trial_budget)


def _exact_side(h_commute: np.ndarray, h_stab: np.ndarray) -> int:
    """Min weight in ker(h_commute) minus rowspace(h_stab), by enumeration."""
    basis = gf2.nullspace(h_commute)
    stab_rref, stab_piv = gf2.rref(h_stab)
    best = None
    dim = basis.shape[0]
    for mask in range(1, 1 << dim):
        v = np.zeros(basis.shape[1], dtype=np.uint8)
        mm = mask
        i = 0
        while mm:
            if mm & 1:
                v ^= basis[i]
            mm >>= 1
            i += 1
        if gf2.in_row_space(v, stab_rref, stab_piv):
            continue
        w = int(v.sum())
        if best is None or w < best:
            best = w
    if best is None:
        raise CodeError("no logical operator found on this side")
    return best


def _sampled_side(h_commute: np.ndarray, h_stab: np.ndarray, budget: int, rng) -> int:
    """Randomized information-set search for low-weight logical operators.

    Each trial permutes the columns, re-echelonizes the kernel basis, and
    scores the resulting rows plus a few random row pairs; stabilizer-space
    vectors are skipped.
    """
    basis = gf2.nullspace(h_commute)
    stab_rref, stab_piv = gf2.rref(h_stab)
    n = basis.shape[1]
    best = None

    def score(v):
        nonlocal best
        if not v.any() or gf2.in_row_space(v, stab_rref, stab_piv):
            return
        w = int(v.sum())
        if best is None or w < best:
            best = w

    for v in basis:
        score(v)
    for _ in range(budget):
        perm = rng.permutation(n)
        red, _ = gf2.rref(basis[:, perm])
        red = red[red.any(axis=1)]
        inv = np.empty(n, dtype=np.int64)
        inv[perm] = np.arange(n)
        rows = red[:, inv]
        for v in rows:
            score(v)
        if rows.shape[0] >= 2:
            for _ in range(4):
                i, j = rng.integers(rows.shape[0], size=2)
                if i != j:
                    score(rows[i] ^ rows[j])
    if best is None:
        raise CodeError("no logical operator found on this side")
    return best
