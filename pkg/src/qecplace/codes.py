"""CSS code construction, validation, and connectivity graphs.

Codes are pairs of sparse binary parity-check matrices (H_X, H_Z) with
H_X H_Z^T = 0 over GF(2). Columns index data qubits, rows index checks.
Node ids in the connectivity graph: data qubits 0..n-1, then X checks,
then Z checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from . import gf2


class CodeError(ValueError):
    """Invalid code parameters or a violated CSS invariant."""


@dataclass(frozen=True)
class BinaryMatrix:
    rows: int
    cols: int
    entries: frozenset  # of (row, col)

    def __post_init__(self):
        for r, c in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise CodeError(f"entry ({r}, {c}) out of bounds for {self.rows}x{self.cols}")

    @staticmethod
    def from_dense(a) -> "BinaryMatrix":
        m = gf2.as_gf2(a)
        ent = frozenset((int(r), int(c)) for r, c in zip(*np.nonzero(m)))
        return BinaryMatrix(m.shape[0], m.shape[1], ent)

    def to_dense(self) -> np.ndarray:
        m = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for r, c in self.entries:
            m[r, c] = 1
        return m

    def popcount(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class CssCode:
    h_x: BinaryMatrix
    h_z: BinaryMatrix
    n: int
    k: int
    d_est: int | None = None
    family_tag: str = "custom"

    @staticmethod
    def from_matrices(h_x: BinaryMatrix, h_z: BinaryMatrix, d_est: int | None = None,
                      family_tag: str = "custom") -> "CssCode":
        if h_x.cols != h_z.cols:
            raise CodeError(f"column mismatch: {h_x.cols} vs {h_z.cols}")
        n = h_x.cols
        hx, hz = h_x.to_dense(), h_z.to_dense()
        if hx.size and hz.size and gf2.matmul(hx, hz.T).any():
            raise CodeError("CSS commutation violated: H_X H_Z^T != 0")
        k = n - gf2.rank(hx) - gf2.rank(hz)
        return CssCode(h_x, h_z, n, k, d_est, family_tag)

    # node id layout
    def data_ids(self) -> range:
        return range(self.n)

    def x_check_ids(self) -> range:
        return range(self.n, self.n + self.h_x.rows)

    def z_check_ids(self) -> range:
        return range(self.n + self.h_x.rows, self.n + self.h_x.rows + self.h_z.rows)


@dataclass(frozen=True)
class ConnectivityGraph:
    nodes: tuple  # of (id, kind) with kind in {"data", "check_x", "check_z"}
    edges: tuple  # of (u, v) with u < v

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        for nid, kind in self.nodes:
            g.add_node(nid, kind=kind)
        g.add_edges_from(self.edges)
        return g


def connectivity_graph(code: CssCode) -> ConnectivityGraph:
    """Bipartite coupling graph: one node per qubit and per check, one edge
    per parity-check matrix nonzero. The Pauli basis is recorded on the node
    kind but never consulted by placement or routing."""
    nodes = [(i, "data") for i in code.data_ids()]
    nodes += [(i, "check_x") for i in code.x_check_ids()]
    nodes += [(i, "check_z") for i in code.z_check_ids()]
    edges = []
    for r, c in sorted(code.h_x.entries):
        edges.append((c, code.n + r))
    for r, c in sorted(code.h_z.entries):
        edges.append((c, code.n + code.h_x.rows + r))
    edges = [(min(u, v), max(u, v)) for u, v in edges]
    return ConnectivityGraph(tuple(nodes), tuple(sorted(set(edges))))


# ---------------------------------------------------------------- surface code

def build_surface_code(d: int) -> tuple[CssCode, dict]:
    """Rotated surface code of odd distance d: [[d^2, 1, d]].

    Returns the code and integer positions on a doubled grid where every
    coupler is a unit straight segment (horizontally/vertically length 2
    between data qubits, sqrt(2) data-to-check), so the layout stays on a
    single tier.
    """
    if d < 3 or d % 2 == 0:
        raise CodeError("surface code distance must be odd and >= 3")
    n = d * d

    def data_idx(row, col):
        return row * d + col

    x_rows, z_rows = [], []
    x_pos, z_pos = [], []
    for r in range(-1, d):
        for c in range(-1, d):
            support = [data_idx(rr, cc)
                       for rr in (r, r + 1) for cc in (c, c + 1)
                       if 0 <= rr < d and 0 <= cc < d]
            interior = 0 <= r <= d - 2 and 0 <= c <= d - 2
            is_x = (r + c) % 2 == 1
            if interior:
                keep = True
            elif r in (-1, d - 1) and 0 <= c <= d - 2:
                keep = is_x  # top/bottom boundary hosts X checks
            elif c in (-1, d - 1) and 0 <= r <= d - 2:
                keep = not is_x  # left/right boundary hosts Z checks
            else:
                keep = False
            if not keep:
                continue
            if is_x:
                x_rows.append(support)
                x_pos.append((2 * c + 1, 2 * r + 1))
            else:
                z_rows.append(support)
                z_pos.append((2 * c + 1, 2 * r + 1))

    hx = BinaryMatrix(len(x_rows), n, frozenset((i, q) for i, row in enumerate(x_rows) for q in row))
    hz = BinaryMatrix(len(z_rows), n, frozenset((i, q) for i, row in enumerate(z_rows) for q in row))
    code = CssCode.from_matrices(hx, hz, d_est=d, family_tag=f"surface_d{d}")
    positions = {data_idx(r, c): (2 * c, 2 * r) for r in range(d) for c in range(d)}
    for i, p in enumerate(x_pos):
        positions[n + i] = p
    for i, p in enumerate(z_pos):
        positions[n + len(x_rows) + i] = p
    return code, positions


# ----------------------------------------------------- bivariate bicycle codes

def _bb_monomial_matrix(l: int, m: int, i: int, j: int, shift: int) -> np.ndarray:
    """Permutation matrix for x^i y^j acting on Z_l x Z_m, with an optional
    twist: wrapping around the x direction shifts the y index."""
    size = l * m
    mat = np.zeros((size, size), dtype=np.uint8)
    for a in range(l):
        for b in range(m):
            a2 = (a + i) % l
            wraps = (a + i) // l
            b2 = (b + j + wraps * shift) % m
            mat[a2 * m + b2, a * m + b] = 1
    return mat


def build_bb_code(l: int, m: int, a_monomials, b_monomials,
                  shift: int = 0) -> tuple[CssCode, dict | None]:
    """Bivariate bicycle code H_X = [A|B], H_Z = [B^T|A^T] on a (twisted)
    l x m torus. Monomials are (i, j) exponent pairs of x^i y^j.

    When A contains a y-consecutive monomial pair and B an x-consecutive
    pair (or vice versa), also returns checkerboard square-grid positions
    under which those four couplers form a nearest-neighbor lattice.
    """
    a_monomials = [tuple(t) for t in a_monomials]
    b_monomials = [tuple(t) for t in b_monomials]
    if len(set(a_monomials)) != len(a_monomials) or len(set(b_monomials)) != len(b_monomials):
        raise CodeError("duplicate monomials")
    for i, j in a_monomials + b_monomials:
        if not (0 <= i < l and 0 <= j < m):
            raise CodeError(f"monomial exponent ({i}, {j}) outside ({l}, {m})")

    A = np.zeros((l * m, l * m), dtype=np.uint8)
    B = np.zeros((l * m, l * m), dtype=np.uint8)
    for i, j in a_monomials:
        A ^= _bb_monomial_matrix(l, m, i, j, shift)
    for i, j in b_monomials:
        B ^= _bb_monomial_matrix(l, m, i, j, shift)

    hx = np.concatenate([A, B], axis=1)
    hz = np.concatenate([B.T, A.T], axis=1)
    code = CssCode.from_matrices(BinaryMatrix.from_dense(hx), BinaryMatrix.from_dense(hz),
                                 family_tag=f"bb_{l}x{m}")
    positions = _bb_square_grid_positions(l, m, a_monomials, b_monomials) if shift == 0 else None
    return code, positions


def _find_consecutive_pair(monomials, axis):
    """(i, j) such that the monomial set contains both (i, j) and its +1
    neighbor along the given axis (0 = x, 1 = y), modulo nothing (plain +1)."""
    s = set(monomials)
    for i, j in sorted(s):
        nxt = (i + 1, j) if axis == 0 else (i, j + 1)
        if nxt in s:
            return (i, j)
    return None


def _bb_square_grid_positions(l, m, a_monomials, b_monomials):
    """Checkerboard positions on a 2l x 2m grid so the two short couplers of
    each check land on unit-length edges. Requires one block to hold a
    y-consecutive pair and the other an x-consecutive pair; returns None
    otherwise."""
    pa = _find_consecutive_pair(a_monomials, axis=1)
    pb = _find_consecutive_pair(b_monomials, axis=0)
    if pa is not None and pb is not None:
        return _bb_positions_canonical(l, m, pa, pb)
    # try the axis-swapped code, then transpose the grid back
    pa2 = _find_consecutive_pair(a_monomials, axis=0)
    pb2 = _find_consecutive_pair(b_monomials, axis=1)
    if pa2 is None or pb2 is None:
        return None
    pos_sw = _bb_positions_canonical(m, l, (pa2[1], pa2[0]), (pb2[1], pb2[0]))
    if pos_sw is None:
        return None
    pos = {}
    lm = l * m
    for a in range(l):
        for b in range(m):
            for blk in range(4):  # L, R, X, Z blocks share the index remap
                gx, gy = pos_sw[blk * lm + b * l + a]
                pos[blk * lm + a * m + b] = (gy, gx)
    return pos


def _bb_positions_canonical(l, m, pair_a, pair_b):
    """Positions when A holds the y-consecutive pair {(alpha, beta),
    (alpha, beta+1)} and B the x-consecutive pair {(gamma, delta),
    (gamma+1, delta)}. Index maps are cyclic shifts per sublattice, chosen so
    those four monomial couplers connect grid-adjacent cells."""
    alpha, beta = pair_a
    gamma, delta = pair_b
    lm = l * m
    pos = {}
    for a in range(l):
        for b in range(m):
            i = a * m + b
            # L data, R data, X checks, Z checks
            pos[i] = (2 * ((a + alpha) % l) + 1, 2 * ((b + beta) % m) + 1)
            pos[lm + i] = (2 * ((a + gamma + 1) % l), 2 * ((b + delta) % m))
            pos[2 * lm + i] = (2 * a + 1, 2 * b)
            pos[3 * lm + i] = (2 * ((a + alpha + gamma + 1) % l), 2 * ((b + beta + delta) % m) + 1)
    if len(set(pos.values())) != len(pos):
        return None
    return pos


# ----------------------------------------------------------------- radial codes

@dataclass(frozen=True)
class RadialSpec:
    r: int
    s: int
    # default chosen so the (2, 2) instance saturates the d <= 2s bound
    seed: int = 2

    def __post_init__(self):
        if self.r < 2 or self.s < 2:
            raise CodeError("radial spec requires r >= 2 and s >= 2")


def _lift_ring_matrix(blocks: list[list[int | None]], s: int) -> np.ndarray:
    """Lift a matrix over F2[x]/(x^s - 1) with monomial entries x^p (None = 0)
    to a binary matrix of s x s circulants."""
    rows, cols = len(blocks), len(blocks[0])
    out = np.zeros((rows * s, cols * s), dtype=np.uint8)
    eye = np.eye(s, dtype=np.uint8)
    for i in range(rows):
        for j in range(cols):
            p = blocks[i][j]
            if p is not None:
                out[i * s:(i + 1) * s, j * s:(j + 1) * s] = np.roll(eye, p % s, axis=0)
    return out


def build_radial_code(spec: RadialSpec, max_retries: int = 200) -> CssCode:
    """Radial code [[2 r^2 s, 2 (r-1)^2, <= 2s]] via the lifted product of two
    r x r matrices of cyclic-shift monomials over F2[x]/(x^s - 1).

    Shift exponents are sampled uniformly; instances failing the
    k = 2(r-1)^2 postcondition are discarded and resampled.
    """
    r, s = spec.r, spec.s
    rng = np.random.default_rng(spec.seed)
    for _ in range(max_retries):
        a = [[int(rng.integers(s)) for _ in range(r)] for _ in range(r)]
        b = [[int(rng.integers(s)) for _ in range(r)] for _ in range(r)]
        code = _lifted_product_code(a, b, s, family_tag=f"radial_r{r}_s{s}")
        if code.k == 2 * (r - 1) ** 2:
            return code
    raise CodeError(f"no radial instance with k = {2 * (r - 1) ** 2} found "
                    f"in {max_retries} samples for (r={r}, s={s})")


def _lifted_product_code(a, b, s: int, family_tag: str) -> CssCode:
    """Lifted product of square monomial matrices a, b over F2[x]/(x^s - 1):
    H_X = [a (x) I | I (x) b*], H_Z = [I (x) b | a* (x) I], * = transpose with
    exponent negation. Commutation holds for any a, b by commutativity of the
    ring and of the Kronecker slots."""
    r = len(a)

    def conj_t(mat):
        return [[-mat[j][i] for j in range(r)] for i in range(r)]

    def kron_left(mat):  # mat (x) I_r
        return [[mat[i // r][j // r] if i % r == j % r else None
                 for j in range(r * r)] for i in range(r * r)]

    def kron_right(mat):  # I_r (x) mat
        return [[mat[i % r][j % r] if i // r == j // r else None
                 for j in range(r * r)] for i in range(r * r)]

    hx = np.concatenate([_lift_ring_matrix(kron_left(a), s),
                         _lift_ring_matrix(kron_right(conj_t(b)), s)], axis=1)
    hz = np.concatenate([_lift_ring_matrix(kron_right(b), s),
                         _lift_ring_matrix(kron_left(conj_t(a)), s)], axis=1)
    return CssCode.from_matrices(BinaryMatrix.from_dense(hx), BinaryMatrix.from_dense(hz),
                                 family_tag=family_tag)


# ------------------------------------------------------------------- file I/O

FORMAT_TAG = "css-matrix/1"


class ParseError(ValueError):
    """Malformed code file."""


def save_code(path, code: CssCode, positions: dict | None = None) -> None:
    doc = {
        "format": FORMAT_TAG,
        "family": code.family_tag,
        "n": code.n,
        "rows_x": code.h_x.rows,
        "rows_z": code.h_z.rows,
        "x_entries": sorted(code.h_x.entries),
        "z_entries": sorted(code.h_z.entries),
    }
    if code.d_est is not None:
        doc["d_est"] = code.d_est
    if positions is not None:
        doc["positions"] = {str(k): list(v) for k, v in sorted(positions.items())}
    with open(path, "w") as f:
        json.dump(doc, f, sort_keys=True, separators=(",", ":"))
        f.write("\n")


def load_code(path) -> tuple[CssCode, dict | None]:
    try:
        with open(path) as f:
            doc = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read code file {path}: {e}") from e
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise ParseError(f"{path}: missing or unsupported format tag")
    try:
        n = int(doc["n"])
        rows_x = int(doc["rows_x"])
        rows_z = int(doc["rows_z"])
        xe = frozenset((int(r), int(c)) for r, c in doc.get("x_entries", []))
        ze = frozenset((int(r), int(c)) for r, c in doc.get("z_entries", []))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"{path}: malformed field: {e}") from e
    try:
        hx = BinaryMatrix(rows_x, n, xe)
        hz = BinaryMatrix(rows_z, n, ze)
    except CodeError as e:
        raise ParseError(f"{path}: {e}") from e
    code = CssCode.from_matrices(hx, hz, d_est=doc.get("d_est"),
                                 family_tag=doc.get("family", "loaded"))
    positions = None
    if "positions" in doc:
        positions = {int(k): tuple(int(c) for c in v) for k, v in doc["positions"].items()}
    return code, positions
