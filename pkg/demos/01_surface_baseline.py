"""A distance-3 surface code is the baseline every layout is scored against.

Its coupling graph is planar and its qubits already sit on a square grid, so
the whole code routes on a single tier with unit-length straight couplers:
raw quantities q = (1 tier, length 1.0, 0 bumps, 0 TSVs) and a hardware
complexity score of exactly 1.00.

Run: python demos/01_surface_baseline.py
"""

from qecplace.codes import build_surface_code, connectivity_graph
from qecplace.metrics import score
from qecplace.placement import place
from qecplace.routing import RoutingConfig, route_all

for d in (3, 5, 7):
    code, positions = build_surface_code(d)
    graph = connectivity_graph(code).to_networkx()

    # the builder already knows the square-grid positions, so placement only
    # rasterizes and normalizes them; no force-directed embedding is needed
    layout, planar = place(graph, custom_positions=positions)
    routed = route_all(graph, layout, planar, RoutingConfig(), seed=0)

    params, components, c_hw = score(routed)
    print(f"d={d}: [[{code.n},{code.k},{d}]]  "
          f"{len(routed.routed_edges)} couplers on {len(routed.tiers)} tier  "
          f"q={params.as_tuple()}  C_hw={c_hw:.2f}")
