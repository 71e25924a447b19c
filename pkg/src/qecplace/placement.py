"""Placement pipeline: communities -> edge ordering -> maximal planar
subgraph -> spring layout -> rasterize -> compact -> normalize.

The output is an integer grid position for every node, plus the planar edge
subset that tier-0 routing attempts first.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy.optimize import minimize


class CapacityError(ValueError):
    """Grid too small for the nodes or the layout extent."""


@dataclass(frozen=True)
class PlanarSubgraph:
    kept_edges: tuple
    rejected_edges: tuple


@dataclass(frozen=True)
class Layout2D:
    coords: dict  # node -> (x, y) ints
    grid_size: int

    def __post_init__(self):
        if len(set(self.coords.values())) != len(self.coords):
            raise ValueError("layout positions must be distinct")


def _canon(u, v):
    return (u, v) if u <= v else (v, u)


def detect_communities(graph: nx.Graph, seed: int = 0) -> dict:
    """Louvain partition, as node -> community id (ids by sorted least member)."""
    if graph.number_of_nodes() == 0:
        return {}
    comms = nx.community.louvain_communities(graph, seed=seed)
    comms = sorted((sorted(c) for c in comms), key=lambda c: c[0])
    return {node: i for i, c in enumerate(comms) for node in c}


def preliminary_coords(graph: nx.Graph, communities: dict, seed: int = 0) -> dict:
    """Continuous positions used only to measure edge lengths for ordering:
    Kamada-Kawai on the community quotient graph places centroids, then
    Kamada-Kawai within each community around its centroid."""
    ncomm = max(communities.values()) + 1 if communities else 0
    if ncomm == 0:
        return {}
    members = [[] for _ in range(ncomm)]
    for node, c in sorted(communities.items()):
        members[c].append(node)

    quotient = nx.Graph()
    quotient.add_nodes_from(range(ncomm))
    for u, v in graph.edges():
        cu, cv = communities[u], communities[v]
        if cu != cv:
            quotient.add_edge(cu, cv)
    spread = 2.0 * math.sqrt(graph.number_of_nodes())
    centroids = kamada_kawai(quotient)
    coords = {}
    for c, nodes in enumerate(members):
        cx, cy = centroids[c]
        sub = graph.subgraph(nodes)
        local = kamada_kawai(sub)
        for node in nodes:
            lx, ly = local[node]
            coords[node] = (cx * spread + lx, cy * spread + ly)
    return coords


def order_edges_for_mps(graph: nx.Graph, communities: dict, prelim_coords: dict) -> list:
    """Intra-community edges by ascending length, then inter-community edges
    by ascending length; stable, ties broken by canonical edge id."""
    edges = sorted(_canon(u, v) for u, v in graph.edges())

    def length(e):
        (x1, y1), (x2, y2) = prelim_coords[e[0]], prelim_coords[e[1]]
        return math.hypot(x1 - x2, y1 - y2)

    intra = [e for e in edges if communities[e[0]] == communities[e[1]]]
    inter = [e for e in edges if communities[e[0]] != communities[e[1]]]
    return sorted(intra, key=lambda e: (length(e), e)) + \
        sorted(inter, key=lambda e: (length(e), e))


def extract_mps(graph: nx.Graph, ordered_edges) -> PlanarSubgraph:
    """Greedy maximal planar subgraph: insert each edge, keep it only if the
    grown subgraph stays planar."""
    test = nx.Graph()
    test.add_nodes_from(graph.nodes())
    kept, rejected = [], []
    for e in ordered_edges:
        test.add_edge(*e)
        ok, _ = nx.check_planarity(test)
        if ok:
            kept.append(e)
        else:
            test.remove_edge(*e)
            rejected.append(e)
    return PlanarSubgraph(tuple(kept), tuple(rejected))


def kamada_kawai(graph: nx.Graph, max_iter: int = 500, tol: float = 1e-4) -> dict:
    """Kamada-Kawai stress minimization: squared difference between
    graph-theoretic and Euclidean distances, weighted 1/d^2, minimized with
    L-BFGS from a circular start ordered by BFS from the highest-degree node.
    Disconnected components are laid out independently and packed
    left-to-right with 2-cell gutters."""
    nodes = sorted(graph.nodes())
    if not nodes:
        return {}
    if len(nodes) == 1:
        return {nodes[0]: (0.0, 0.0)}
    comps = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    if len(comps) > 1:
        coords = {}
        x_cursor = 0.0
        for comp in comps:
            sub = kamada_kawai(graph.subgraph(comp), max_iter, tol)
            xs = [p[0] for p in sub.values()]
            ys = [p[1] for p in sub.values()]
            shift = x_cursor - min(xs)
            for node in comp:
                x, y = sub[node]
                coords[node] = (x + shift, y - min(ys))
            x_cursor += (max(xs) - min(xs)) + 2.0
        return coords

    start = min(nodes, key=lambda v: (-graph.degree(v), v))
    order = list(nx.bfs_tree(graph, start))
    idx = {v: i for i, v in enumerate(nodes)}
    nn = len(nodes)

    dist = np.zeros((nn, nn))
    for src, lengths in nx.all_pairs_shortest_path_length(graph):
        for dst, d in lengths.items():
            dist[idx[src], idx[dst]] = d
    radius = nn / (2.0 * math.pi)
    init = np.zeros((nn, 2))
    for i, v in enumerate(order):
        ang = 2.0 * math.pi * i / nn
        init[idx[v]] = (radius * math.cos(ang), radius * math.sin(ang))

    weights = np.zeros_like(dist)
    mask = dist > 0
    weights[mask] = 1.0 / dist[mask] ** 2

    def stress_grad(flat):
        pos = flat.reshape(nn, 2)
        delta = pos[:, None, :] - pos[None, :, :]
        eu = np.sqrt((delta ** 2).sum(axis=2))
        np.fill_diagonal(eu, 1.0)
        diff = eu - dist
        stress = 0.5 * (weights * diff ** 2).sum()
        coef = weights * diff / eu
        np.fill_diagonal(coef, 0.0)
        grad = (coef[:, :, None] * delta).sum(axis=1) * 2.0
        return stress, grad.ravel()

    res = minimize(stress_grad, init.ravel(), jac=True, method="L-BFGS-B",
                   options={"maxiter": max_iter, "gtol": tol})
    pos = res.x.reshape(nn, 2)
    return {v: (float(pos[idx[v], 0]), float(pos[idx[v], 1])) for v in nodes}


def spring_layout(planar: PlanarSubgraph, nodes=None, max_iter: int = 500,
                  tol: float = 1e-4) -> dict:
    """Continuous coordinates for the planar subgraph's nodes."""
    g = nx.Graph()
    if nodes is not None:
        g.add_nodes_from(nodes)
    g.add_edges_from(planar.kept_edges)
    return kamada_kawai(g, max_iter, tol)


def rasterize(coords: dict, bounds: int | None = None) -> Layout2D:
    """Snap continuous coordinates to distinct integer cells.

    Phase 1 floor-rounds everything and accepts nodes whose cell is claimed
    by no one else. Phase 2 places the conflicted rest via a min-heap keyed
    by distance to the nearest free cell (found on expanding square shells),
    re-keying lazily as cells get claimed.
    """
    if bounds is not None and len(coords) > bounds * bounds:
        raise CapacityError(f"{len(coords)} nodes cannot fit a {bounds}x{bounds} grid")

    def in_bounds(cell):
        return bounds is None or (0 <= cell[0] < bounds and 0 <= cell[1] < bounds)

    floored = {v: (math.floor(x), math.floor(y)) for v, (x, y) in coords.items()}
    claims = {}
    for v in sorted(floored):
        claims.setdefault(floored[v], []).append(v)
    placed = {}
    taken = set()
    pending = []
    for cell, nodes in claims.items():
        if len(nodes) == 1 and in_bounds(cell):
            placed[nodes[0]] = cell
            taken.add(cell)
        else:
            pending.extend(nodes)

    def nearest_free(v):
        # expand square shells; any cell on shell r is at Euclidean distance
        # >= r - 1 from the continuous target, so once a candidate is found
        # only finitely many further shells can improve on it
        fx, fy = floored[v]
        best = None
        for r in itertools.count():
            if best is not None and r - 1 > best[0]:
                return best
            cand = _best_in_shell(fx, fy, r, coords[v], taken, in_bounds)
            if cand is not None and (best is None or cand < best):
                best = cand
            if bounds is not None and r > 2 * bounds:
                if best is not None:
                    return best
                raise CapacityError("no free cell within grid bounds")

    heap = []
    for v in sorted(pending):
        d, cell = nearest_free(v)
        heapq.heappush(heap, (d, v, cell))
    while heap:
        d, v, cell = heapq.heappop(heap)
        if v in placed:
            continue
        if cell in taken:
            nd, ncell = nearest_free(v)
            heapq.heappush(heap, (nd, v, ncell))
            continue
        placed[v] = cell
        taken.add(cell)
    return Layout2D(placed, bounds if bounds is not None else 0)


def _chebyshev_shell(cx, cy, r):
    if r == 0:
        return [(cx, cy)]
    cells = []
    for x in range(cx - r, cx + r + 1):
        cells.append((x, cy - r))
        cells.append((x, cy + r))
    for y in range(cy - r + 1, cy + r):
        cells.append((cx - r, y))
        cells.append((cx + r, y))
    return cells


def _best_in_shell(fx, fy, r, target, taken, in_bounds):
    best = None
    for cell in _chebyshev_shell(fx, fy, r):
        if cell in taken or not in_bounds(cell):
            continue
        d = math.hypot(cell[0] - target[0], cell[1] - target[1])
        if best is None or (d, cell) < best:
            best = (d, cell)
    return best


def compact(layout: Layout2D) -> Layout2D:
    """Remap the distinct coordinate values on each axis to 0..k-1,
    preserving per-axis order."""
    xs = sorted({p[0] for p in layout.coords.values()})
    ys = sorted({p[1] for p in layout.coords.values()})
    xmap = {x: i for i, x in enumerate(xs)}
    ymap = {y: i for i, y in enumerate(ys)}
    return Layout2D({v: (xmap[x], ymap[y]) for v, (x, y) in layout.coords.items()},
                    layout.grid_size)


def normalize(layout: Layout2D, grid_size: int) -> Layout2D:
    """Translate to the positive quadrant and scale by the largest integer
    factor that keeps the layout inside [0, grid_size)^2."""
    if not layout.coords:
        return Layout2D({}, grid_size)
    xs = [p[0] for p in layout.coords.values()]
    ys = [p[1] for p in layout.coords.values()]
    x0, y0 = min(xs), min(ys)
    extent = max(max(xs) - x0, max(ys) - y0)
    if extent >= grid_size:
        raise CapacityError(f"extent {extent} exceeds grid size {grid_size}")
    scale = (grid_size - 1) // extent if extent > 0 else 1
    return Layout2D({v: ((x - x0) * scale, (y - y0) * scale)
                     for v, (x, y) in layout.coords.items()}, grid_size)


def place(graph: nx.Graph, grid_size: int = 500, seed: int = 0,
          custom_positions: dict | None = None) -> tuple[Layout2D, PlanarSubgraph | None]:
    """Full placement. With custom positions only rasterization and
    normalization run, and no planar subgraph is extracted (tier-0 routing
    later attempts every edge directly)."""
    if custom_positions is not None:
        missing = set(graph.nodes()) - set(custom_positions)
        if missing:
            raise ValueError(f"custom positions missing {len(missing)} nodes")
        layout = rasterize({v: (float(x), float(y))
                            for v, (x, y) in custom_positions.items()})
        return normalize(layout, grid_size), None
    communities = detect_communities(graph, seed)
    prelim = preliminary_coords(graph, communities, seed)
    ordered = order_edges_for_mps(graph, communities, prelim)
    planar = extract_mps(graph, ordered)
    coords = spring_layout(planar, nodes=graph.nodes())
    layout = rasterize(coords)
    layout = compact(layout)
    return normalize(layout, grid_size), planar
