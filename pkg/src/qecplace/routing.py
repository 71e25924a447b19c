"""Multi-tier grid routing.

Every tier is a grid Z^2 x {0,1}. Tier 0 hosts the qubits and uses a single
layer with straight segments only; higher tiers get straight-with-bumps
attempts first and A* as fallback. An edge that fails twice in the same tier
declares the tier congested and the remainder escalates to a fresh tier.

Occupancy is strict: a cell belongs to at most one net. Around every node a
reservation of Chebyshev radius node_size keeps foreign nets out while the
node's own couplers fan in; committed traces are padded with an edge_margin
halo outside those reservations.
"""

from __future__ import annotations

import heapq
import json
import math
from collections import deque
from dataclasses import dataclass, field, asdict

import numpy as np

from .placement import Layout2D, PlanarSubgraph

SCHEMA = "routed-layout/1"

_SQRT2 = math.sqrt(2.0)
_BUMP_PENALTY = 0.01


class RoutingError(RuntimeError):
    def __init__(self, message, unrouted=()):
        super().__init__(message)
        self.unrouted = list(unrouted)


@dataclass(frozen=True)
class RoutingConfig:
    grid_size: int = 500
    edge_margin: int = 1
    node_size: int = 1
    max_bumps: int = 10
    max_tsvs: int | None = None
    max_length_factor: float = 1000.0
    max_tiers: int = 20

    def __post_init__(self):
        if self.grid_size < 1 or self.edge_margin < 0 or self.node_size < 0:
            raise ValueError("invalid routing config")
        if self.max_bumps < 0 or self.max_length_factor <= 0 or self.max_tiers < 0:
            raise ValueError("invalid routing config")


@dataclass(frozen=True)
class RoutedEdge:
    edge: tuple
    tier_index: int
    path: tuple  # of (x, y, z)
    bumps: int
    tsvs: int
    length: float


@dataclass
class RoutedLayout:
    layout: Layout2D
    tiers: list  # of TierGrid
    routed_edges: dict  # edge -> RoutedEdge
    config: RoutingConfig
    seed: int

    def serialize(self) -> str:
        doc = {
            "schema": SCHEMA,
            "seed": self.seed,
            "config": asdict(self.config),
            "grid_size": self.layout.grid_size,
            "positions": {str(v): list(p) for v, p in sorted(self.layout.coords.items())},
            "num_tiers": len(self.tiers),
            "edges": [
                {
                    "edge": list(re.edge),
                    "tier": re.tier_index,
                    "path": [list(c) for c in re.path],
                    "bumps": re.bumps,
                    "tsvs": re.tsvs,
                    "length": round(re.length, 9),
                }
                for _, re in sorted(self.routed_edges.items())
            ],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def supercover(x0, y0, x1, y1):
    """Grid cells touched by the segment between two cell centers, in
    traversal order. Exact corner hits step diagonally, so consecutive cells
    always differ by one cardinal or diagonal step."""
    dx, dy = x1 - x0, y1 - y0
    sx = 1 if dx > 0 else -1
    sy = 1 if dy > 0 else -1
    adx, ady = abs(dx), abs(dy)
    cells = [(x0, y0)]
    x, y = x0, y0
    i = j = 0
    while i < adx or j < ady:
        # compare next boundary crossings (2i+1)/2adx vs (2j+1)/2ady
        if j >= ady:
            cmp = -1
        elif i >= adx:
            cmp = 1
        else:
            lhs = (2 * i + 1) * ady
            rhs = (2 * j + 1) * adx
            cmp = -1 if lhs < rhs else (1 if lhs > rhs else 0)
        if cmp < 0:
            x += sx
            i += 1
        elif cmp > 0:
            y += sy
            j += 1
        else:
            x += sx
            y += sy
            i += 1
            j += 1
        cells.append((x, y))
    return cells


class TierGrid:
    """Occupancy state of one tier.

    occ codes: 0 free, -1 node cell, net_id + 1 trace. halo codes: 0 none,
    net_id + 1 single owner, -2 contested. Reservations store up to two
    owning nodes per cell (node id + 1)."""

    def __init__(self, tier_index: int, grid_size: int, layers: int,
                 node_positions: dict, node_size: int):
        self.tier_index = tier_index
        self.grid_size = grid_size
        self.layers = layers
        self.positions = dict(node_positions)
        g = grid_size
        self.occ = np.zeros((g, g, layers), dtype=np.int32)
        self.halo = np.zeros((g, g, layers), dtype=np.int32)
        self.res_a = np.zeros((g, g), dtype=np.int32)
        self.res_b = np.zeros((g, g), dtype=np.int32)
        self.node_at = {}
        self.edges = []  # RoutedEdge committed on this tier
        for node in sorted(self.positions):
            x, y = self.positions[node]
            self.node_at[(x, y)] = node
            self.occ[x, y, 0] = -1
            for px in range(max(0, x - node_size), min(g, x + node_size + 1)):
                for py in range(max(0, y - node_size), min(g, y + node_size + 1)):
                    if self.res_a[px, py] == 0:
                        self.res_a[px, py] = node + 1
                    elif self.res_b[px, py] == 0:
                        self.res_b[px, py] = node + 1
                    # a third overlapping reservation keeps the first two

    def enterable(self, x, y, z, net, u, v):
        g = self.grid_size
        if not (0 <= x < g and 0 <= y < g and 0 <= z < self.layers):
            return False
        o = self.occ[x, y, z]
        if o == -1:
            return (x, y) == self.positions.get(u) or (x, y) == self.positions.get(v)
        if o != 0 and o != net + 1:
            return False
        ra, rb = self.res_a[x, y], self.res_b[x, y]
        if ra or rb:
            if (u + 1) not in (ra, rb) and (v + 1) not in (ra, rb):
                return False
        h = self.halo[x, y, z]
        if h != 0 and h != net + 1:
            return False
        return True

    def commit(self, path, net, u, v, edge_margin):
        g = self.grid_size
        painted = []
        for x, y, z in path:
            if self.occ[x, y, z] == -1:
                continue  # terminal node cell stays node-blocked
            self.occ[x, y, z] = net + 1
            painted.append((x, y, z))
        for x, y, z in painted:
            for px in range(max(0, x - edge_margin), min(g, x + edge_margin + 1)):
                for py in range(max(0, y - edge_margin), min(g, y + edge_margin + 1)):
                    if self.res_a[px, py] or self.res_b[px, py]:
                        continue  # no halo inside node reservations
                    h = self.halo[px, py, z]
                    if h == 0:
                        self.halo[px, py, z] = net + 1
                    elif h != net + 1:
                        self.halo[px, py, z] = -2


def path_length(path) -> float:
    total = 0.0
    for (x0, y0, z0), (x1, y1, z1) in zip(path, path[1:]):
        if z0 != z1:
            continue  # vertical moves have no geometric length
        total += _SQRT2 if (x0 != x1 and y0 != y1) else 1.0
    return total


def straight_route(tier: TierGrid, edge, net, allow_bumps: bool, max_bumps: int):
    """Straight segment between the edge's terminals; with bumps allowed, an
    obstruction flips to the opposing layer at the last free cell, which then
    hosts the bump on both layers."""
    u, v = edge
    (x0, y0), (x1, y1) = tier.positions[u], tier.positions[v]
    cells = supercover(x0, y0, x1, y1)
    z = 0
    bumps = 0
    path = [(x0, y0, 0)]
    for x, y in cells[1:]:
        if tier.enterable(x, y, z, net, u, v):
            path.append((x, y, z))
            continue
        if not allow_bumps:
            return None
        other = 1 - z
        px, py, _ = path[-1]
        if bumps + 1 > max_bumps:
            return None
        if not tier.enterable(px, py, other, net, u, v):
            return None
        if not tier.enterable(x, y, other, net, u, v):
            return None
        bumps += 1
        path.append((px, py, other))
        path.append((x, y, other))
        z = other
    if z != 0:
        # land on the target's layer-0 node cell
        if bumps + 1 > max_bumps:
            return None
        path.append((x1, y1, 0))
        bumps += 1
    return path, bumps


_MOVES = [(1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
          (1, 1, _SQRT2), (1, -1, _SQRT2), (-1, 1, _SQRT2), (-1, -1, _SQRT2)]


def astar_route(tier: TierGrid, edge, net, config: RoutingConfig,
                max_length: float = math.inf):
    """A* over cardinal, diagonal, and vertical moves. Admissible with the
    Euclidean-to-target heuristic; vertical moves cost only a small penalty
    that discourages gratuitous bumps."""
    u, v = edge
    sx, sy = tier.positions[u]
    tx, ty = tier.positions[v]
    g = tier.grid_size
    dist = np.full((g, g, tier.layers), np.inf, dtype=np.float64)
    came = {}
    dist[sx, sy, 0] = 0.0
    start_h = math.hypot(sx - tx, sy - ty)
    heap = [(start_h, 0.0, sx, sy, 0)]
    budget = max_length + config.max_bumps * _BUMP_PENALTY + 1e-6
    while heap:
        f, d, x, y, z = heapq.heappop(heap)
        if d > dist[x, y, z]:
            continue
        if x == tx and y == ty and z == 0:
            path = [(x, y, z)]
            while (x, y, z) != (sx, sy, 0):
                x, y, z = came[(x, y, z)]
                path.append((x, y, z))
            path.reverse()
            bumps = sum(1 for a, b in zip(path, path[1:]) if a[2] != b[2])
            if bumps > config.max_bumps:
                return None
            return path, bumps
        for ddx, ddy, cost in _MOVES:
            nx_, ny_ = x + ddx, y + ddy
            nd = d + cost
            if nd > budget:
                continue
            if not (0 <= nx_ < g and 0 <= ny_ < g):
                continue
            if nd < dist[nx_, ny_, z] and tier.enterable(nx_, ny_, z, net, u, v):
                dist[nx_, ny_, z] = nd
                came[(nx_, ny_, z)] = (x, y, z)
                h = math.hypot(nx_ - tx, ny_ - ty)
                heapq.heappush(heap, (nd + h, nd, nx_, ny_, z))
        if tier.layers == 2:
            nz = 1 - z
            nd = d + _BUMP_PENALTY
            if nd < dist[x, y, nz] and tier.enterable(x, y, nz, net, u, v):
                dist[x, y, nz] = nd
                came[(x, y, nz)] = (x, y, z)
                h = math.hypot(x - tx, y - ty)
                heapq.heappush(heap, (nd + h, nd, x, y, nz))
    return None


def _straight_len(layout: Layout2D, edge) -> float:
    (x0, y0), (x1, y1) = layout.coords[edge[0]], layout.coords[edge[1]]
    return math.hypot(x1 - x0, y1 - y0)


def route_qubit_tier(layout: Layout2D, planar: PlanarSubgraph | None, edges,
                     config: RoutingConfig, edge_ids: dict):
    """Tier 0: planar-subgraph edges first, then every remaining edge, each
    as a straight single-layer segment. Returns the tier, the committed
    RoutedEdges, and the FIFO of failures."""
    tier = TierGrid(0, config.grid_size, 1, layout.coords, config.node_size)
    if planar is None:
        first, rest = list(edges), []
    else:
        kept = set(planar.kept_edges)
        first = [e for e in edges if e in kept]
        rest = [e for e in edges if e not in kept]
    order = sorted(first, key=lambda e: (_straight_len(layout, e), e)) + \
        sorted(rest, key=lambda e: (_straight_len(layout, e), e))
    routed = []
    fifo = []
    for e in order:
        res = straight_route(tier, e, edge_ids[e], allow_bumps=False,
                             max_bumps=config.max_bumps)
        if res is None:
            fifo.append(e)
            continue
        path, bumps = res
        re = RoutedEdge(e, 0, tuple(path), bumps, 0, path_length(path))
        tier.commit(path, edge_ids[e], e[0], e[1], config.edge_margin)
        tier.edges.append(re)
        routed.append(re)
    return tier, routed, fifo


def route_tier(tier_index: int, fifo, layout: Layout2D, config: RoutingConfig,
               edge_ids: dict, max_length: float):
    """One higher tier: straight-with-bumps then A* per edge; failures go to
    the back of the queue, and a second pop of the same edge declares the
    tier congested."""
    nodes = sorted({n for e in fifo for n in e})
    positions = {n: layout.coords[n] for n in nodes}
    tier = TierGrid(tier_index, config.grid_size, 2, positions, config.node_size)
    queue = deque(sorted(fifo, key=lambda e: (_straight_len(layout, e), e)))
    attempted = set()
    routed = []
    leftover = []
    while queue:
        e = queue.popleft()
        if e in attempted:
            leftover = [e] + list(queue)
            break
        attempted.add(e)
        net = edge_ids[e]
        res = straight_route(tier, e, net, allow_bumps=True, max_bumps=config.max_bumps)
        if res is None:
            res = astar_route(tier, e, net, config, max_length)
        if res is None:
            queue.append(e)
            continue
        path, bumps = res
        re = RoutedEdge(e, tier_index, tuple(path), bumps, 2 * tier_index,
                        path_length(path))
        tier.commit(path, net, e[0], e[1], config.edge_margin)
        tier.edges.append(re)
        routed.append(re)
    return tier, routed, leftover


def route_all(graph, layout: Layout2D, planar: PlanarSubgraph | None,
              config: RoutingConfig = RoutingConfig(), seed: int = 0) -> RoutedLayout:
    """Route every edge of the graph, creating higher tiers on demand until
    the FIFO drains or a resource cap fails the layout."""
    edges = sorted((min(u, v), max(u, v)) for u, v in graph.edges())
    edge_ids = {e: i for i, e in enumerate(edges)}
    tier0, routed, fifo = route_qubit_tier(layout, planar, edges, config, edge_ids)
    tiers = [tier0]
    routed_edges = {re.edge: re for re in routed}
    min_len = min((re.length for re in routed if re.length > 0), default=math.inf)
    tier_index = 0
    while fifo:
        tier_index += 1
        if tier_index > config.max_tiers:
            raise RoutingError(
                f"max_tiers={config.max_tiers} exhausted with {len(fifo)} edges unrouted",
                unrouted=fifo)
        if config.max_tsvs is not None and 2 * tier_index > config.max_tsvs:
            raise RoutingError(
                f"max_tsvs={config.max_tsvs} forbids tier {tier_index}; "
                f"{len(fifo)} edges unrouted", unrouted=fifo)
        max_length = config.max_length_factor * min_len
        tier, routed, leftover = route_tier(tier_index, fifo, layout, config,
                                            edge_ids, max_length)
        if not routed:
            raise RoutingError(
                f"tier {tier_index} routed no edges; {len(fifo)} edges unroutable",
                unrouted=fifo)
        tiers.append(tier)
        for re in routed:
            routed_edges[re.edge] = re
            if 0 < re.length < min_len:
                min_len = re.length
        fifo = leftover
    return RoutedLayout(layout, tiers, routed_edges, config, seed)
