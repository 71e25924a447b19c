"""Place-and-route toolkit for CSS quantum-code connectivity graphs on
multilayer superconducting grids.

Pipeline: build a code and its coupling graph (`codes`, `tiles`), embed the
qubits on an integer grid (`placement`), route every coupler across stacked
tiers (`routing`), and score the result (`metrics`). `report` and `cli` wrap
the pipeline for batch runs; `render` draws per-tier SVGs.
"""

from .codes import (BinaryMatrix, CodeError, ConnectivityGraph, CssCode,
                    ParseError, RadialSpec, build_bb_code, build_radial_code,
                    build_surface_code, connectivity_graph, load_code,
                    save_code)
from .distance import DistanceEstimate, estimate_distance
from .metrics import (CodeReport, ComplexityModel, FidelityEstimate,
                      HardwareParams, logical_efficiency, score,
                      sweep_model, tsv_fidelity_estimate)
from .placement import CapacityError, Layout2D, PlanarSubgraph, place
from .report import BatchManifest, ConfigError, RunConfig, build_code, run_entry
from .routing import (RoutedEdge, RoutedLayout, RoutingConfig, RoutingError,
                      route_all)
from .tiles import TileSpec, build_tile_code

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "1.0.0"
