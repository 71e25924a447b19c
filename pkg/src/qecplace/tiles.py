"""Open-boundary tile codes.

Data qubits live on the edges of a rectangular vertex lattice. A tile is a
set of edge offsets relative to an anchor vertex; X and Z tiles are
translated to every vertex, tiles reaching past the boundary are truncated,
and the code is pruned until every data qubit is checked, every check is
nonempty, and the truncated boundary checks commute.

Edge offsets are (kind, dx, dy) with kind "h" (edge from vertex (dx, dy) to
(dx+1, dy)) or "v" (edge to (dx, dy+1)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .codes import BinaryMatrix, CssCode, CodeError

HEURISTICS = ("random", "manhattan", "euclidean", "nearest_neighbor", "manual")


@dataclass(frozen=True)
class TileSpec:
    x_tile: frozenset  # of (kind, dx, dy)
    z_tile: frozenset
    lattice_width: int   # vertices along x
    lattice_height: int  # vertices along y
    check_heuristic: str = "euclidean"
    manual_positions: dict | None = None
    seed: int = 0

    def __post_init__(self):
        if self.check_heuristic not in HEURISTICS:
            raise CodeError(f"unknown heuristic {self.check_heuristic!r}")
        if self.check_heuristic == "manual" and self.manual_positions is None:
            raise CodeError("manual heuristic requires manual_positions")
        for tile in (self.x_tile, self.z_tile):
            for kind, dx, dy in tile:
                if kind not in ("h", "v"):
                    raise CodeError(f"bad edge kind {kind!r}")
                if max(abs(dx), abs(dy)) > 100:
                    raise CodeError("tile not bounded")
        if self.lattice_width < 1 or self.lattice_height < 1:
            raise CodeError("lattice dimensions must be positive")


def _edge_sites(w, h):
    """All edges of a w x h vertex lattice, in a fixed order."""
    sites = [("h", x, y) for y in range(h) for x in range(w - 1)]
    sites += [("v", x, y) for y in range(h - 1) for x in range(w)]
    return sites


def _translate(tile, ax, ay, w, h):
    """Tile anchored at vertex (ax, ay), truncated to the lattice."""
    out = []
    for kind, dx, dy in sorted(tile):
        x, y = ax + dx, ay + dy
        if kind == "h" and 0 <= x < w - 1 and 0 <= y < h:
            out.append(("h", x, y))
        elif kind == "v" and 0 <= x < w and 0 <= y < h - 1:
            out.append(("v", x, y))
    return out


def build_tile_code(spec: TileSpec) -> tuple[CssCode, dict]:
    """Construct the tile code and integer qubit positions on a doubled grid
    (data qubits at edge midpoints, X checks on vertices, Z checks on faces,
    heuristic-assigned)."""
    w, h = spec.lattice_width, spec.lattice_height
    edges = _edge_sites(w, h)

    # X checks anchor on the vertex grid, Z checks on the face grid, so each
    # basis has at most as many checks as candidate positions
    x_checks = []  # (anchor, support as edge list, full tile weight)
    z_checks = []
    for ay in range(h):
        for ax in range(w):
            sup = _translate(spec.x_tile, ax, ay, w, h)
            if sup:
                x_checks.append(((ax, ay), sup, len(spec.x_tile)))
    for ay in range(h - 1):
        for ax in range(w - 1):
            sup = _translate(spec.z_tile, ax, ay, w, h)
            if sup:
                z_checks.append(((ax, ay), sup, len(spec.z_tile)))

    x_checks, z_checks, kept_edges = _prune(x_checks, z_checks, edges)
    col = {e: i for i, e in enumerate(kept_edges)}
    n = len(kept_edges)
    if n == 0:
        raise CodeError("tile code is trivial: all data qubits pruned")

    hx = BinaryMatrix(len(x_checks), n,
                      frozenset((i, col[e]) for i, (_, sup, _) in enumerate(x_checks) for e in sup))
    hz = BinaryMatrix(len(z_checks), n,
                      frozenset((i, col[e]) for i, (_, sup, _) in enumerate(z_checks) for e in sup))
    code = CssCode.from_matrices(hx, hz, family_tag=f"tile_{w}x{h}")

    positions = _data_positions(kept_edges)
    data_pos = {col[e]: positions[col[e]] for e in kept_edges}
    x_ids = list(code.x_check_ids())
    z_ids = list(code.z_check_ids())
    supports = {}
    candidates = {}
    for ids, checks, sites in ((x_ids, x_checks, "vertex"), (z_ids, z_checks, "face")):
        for nid, (anchor, sup, _) in zip(ids, checks):
            supports[nid] = [col[e] for e in sup]
            candidates[nid] = _candidate_sites(anchor, sup, sites, w, h)
    check_pos = place_check_qubits(data_pos, supports, candidates,
                                   spec.check_heuristic, seed=spec.seed,
                                   manual_positions=spec.manual_positions)
    positions.update(check_pos)
    return code, positions


def _prune(x_checks, z_checks, edges):
    """Drop unchecked data qubits and empty checks, then greedily remove
    truncated boundary checks until X and Z checks commute.

    A data qubit is unchecked when fewer than both bases act on it; keeping
    such a qubit would leave a weight-1 logical operator, so removal protects
    the distance. Removals cascade: shrinking a check can orphan more qubits,
    and the commutation repair can shrink coverage again."""
    while True:
        # fixpoint: restrict supports to qubits checked by both bases
        while True:
            x_used = set()
            for _, sup, _ in x_checks:
                x_used.update(sup)
            z_used = set()
            for _, sup, _ in z_checks:
                z_used.update(sup)
            both = x_used & z_used
            x_checks = [(a, [e for e in sup if e in both], w)
                        for a, sup, w in x_checks]
            x_checks = [c for c in x_checks if c[1]]
            z_checks = [(a, [e for e in sup if e in both], w)
                        for a, sup, w in z_checks]
            z_checks = [c for c in z_checks if c[1]]
            if x_used == z_used == both:
                break
        kept_edges = [e for e in edges if e in both]
        bad = _violations(x_checks, z_checks)
        if not bad:
            return x_checks, z_checks, kept_edges
        victim_side, victim = _pick_victim(bad, x_checks, z_checks)
        if victim_side == "x":
            x_checks = x_checks[:victim] + x_checks[victim + 1:]
        else:
            z_checks = z_checks[:victim] + z_checks[victim + 1:]


def _violations(x_checks, z_checks):
    out = []
    z_sets = [frozenset(sup) for _, sup, _ in z_checks]
    for i, (_, xsup, _) in enumerate(x_checks):
        xs = frozenset(xsup)
        for j, zs in enumerate(z_sets):
            if len(xs & zs) % 2 == 1:
                out.append((i, j))
    return out


def _pick_victim(bad, x_checks, z_checks):
    """Most-truncated check involved in a violation; ties by lower weight,
    then by side and index, keeping removal deterministic."""
    cands = []
    for i, j in bad:
        for side, idx, checks in (("x", i, x_checks), ("z", j, z_checks)):
            _, sup, full = checks[idx]
            lost = full - len(sup)
            cands.append((-lost, len(sup), side, idx))
    cands.sort()
    _, _, side, idx = cands[0]
    return side, idx


def _data_positions(kept_edges):
    pos = {}
    for i, (kind, x, y) in enumerate(kept_edges):
        pos[i] = (2 * x + 1, 2 * y) if kind == "h" else (2 * x, 2 * y + 1)
    return pos


def _candidate_sites(anchor, support, site_class, w, h):
    """Free-position candidates for one check, ordered by growing bounding
    boxes around the support so early entries are local and the full site
    class is eventually reachable."""
    xs = [x for kind, x, y in support] + [anchor[0]]
    ys = [y for kind, x, y in support] + [anchor[1]]
    sites = []
    seen = set()
    for grow in range(1, max(w, h) + 1):
        x0, x1 = min(xs) - grow, max(xs) + grow
        y0, y1 = min(ys) - grow, max(ys) + grow
        for y in range(max(y0, 0), min(y1, h - 1) + 1):
            for x in range(max(x0, 0), min(x1, w - 1) + 1):
                if site_class == "vertex":
                    s = (2 * x, 2 * y)
                elif x < w - 1 and y < h - 1:
                    s = (2 * x + 1, 2 * y + 1)
                else:
                    continue
                if s not in seen:
                    seen.add(s)
                    sites.append(s)
    return sites


def place_check_qubits(data_pos, supports, candidates, heuristic,
                       seed: int = 0, manual_positions=None):
    """Assign one grid site to every check, each site used at most once.

    data_pos: data qubit id -> (x, y); supports: check id -> data ids;
    candidates: check id -> candidate sites. Deterministic for the distance
    heuristics (ties by lexicographic site order), seeded for random.
    """
    if heuristic not in HEURISTICS:
        raise CodeError(f"unknown heuristic {heuristic!r}")
    rng = np.random.default_rng(seed)
    taken = set(map(tuple, data_pos.values()))
    out = {}
    for cid in sorted(supports):
        if heuristic == "manual":
            if manual_positions is None or cid not in manual_positions:
                raise CodeError(f"manual heuristic: no position for check {cid}")
            site = tuple(manual_positions[cid])
            if site in taken:
                raise CodeError(f"manual position {site} already occupied")
            out[cid] = site
            taken.add(site)
            continue
        free = [s for s in candidates[cid] if s not in taken]
        if not free:
            raise CodeError(f"no free candidate position for check {cid}")
        pts = [data_pos[q] for q in supports[cid]]
        if heuristic == "random":
            # candidates are ordered by locality; sample among the nearest
            local = free[:max(1, min(len(free), 9))]
            site = local[int(rng.integers(len(local)))]
        else:
            site = min(free, key=lambda s: (_site_score(s, pts, heuristic), s))
        out[cid] = site
        taken.add(site)
    return out


def _site_score(site, pts, heuristic):
    sx, sy = site
    if heuristic == "manhattan":
        return sum(abs(sx - x) + abs(sy - y) for x, y in pts)
    if heuristic == "euclidean":
        return sum(((sx - x) ** 2 + (sy - y) ** 2) ** 0.5 for x, y in pts)
    # nearest_neighbor: maximize unit adjacencies, break ties by euclidean sum
    nn = sum(1 for x, y in pts if abs(sx - x) + abs(sy - y) == 1)
    return (-nn, sum(((sx - x) ** 2 + (sy - y) ** 2) ** 0.5 for x, y in pts))


# canonical surface-code tiles, used by tests and as a template
SURFACE_X_TILE = frozenset({("h", -1, 0), ("h", 0, 0), ("v", 0, -1), ("v", 0, 0)})
SURFACE_Z_TILE = frozenset({("h", 0, 0), ("h", 0, 1), ("v", 0, 0), ("v", 1, 0)})
