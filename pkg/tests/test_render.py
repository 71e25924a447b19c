"""SVG rendering of routed layouts."""

import json

import pytest

from qecplace.codes import build_surface_code, connectivity_graph
from qecplace.placement import place
from qecplace.render import SchemaError, load_layout_doc, render_tiers, render_to_files
from qecplace.routing import SCHEMA, RoutingConfig, route_all


@pytest.fixture(scope="module")
def surface_doc():
    code, pos = build_surface_code(3)
    g = connectivity_graph(code).to_networkx()
    layout, planar = place(g, custom_positions=pos)
    routed = route_all(g, layout, planar, RoutingConfig(), seed=0)
    return json.loads(routed.serialize())


@pytest.fixture(scope="module")
def multi_tier_doc():
    # auto placement of the d=3 surface graph needs a second tier
    code, _ = build_surface_code(3)
    g = connectivity_graph(code).to_networkx()
    layout, planar = place(g, seed=0)
    routed = route_all(g, layout, planar, RoutingConfig(), seed=0)
    doc = json.loads(routed.serialize())
    assert doc["num_tiers"] >= 2
    return doc


def test_one_svg_per_tier(surface_doc, multi_tier_doc):
    for doc in (surface_doc, multi_tier_doc):
        svgs = render_tiers(doc)
        assert len(svgs) == doc["num_tiers"]
        for svg in svgs:
            assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_tier_zero_shows_every_node(surface_doc):
    svg = render_tiers(surface_doc)[0]
    assert svg.count("<circle") >= len(surface_doc["positions"])
    assert "tier 0" in svg


def test_higher_tier_shows_only_incident_nodes_and_tsvs(multi_tier_doc):
    svgs = render_tiers(multi_tier_doc)
    tier1_edges = [e for e in multi_tier_doc["edges"] if e["tier"] == 1]
    incident = {n for e in tier1_edges for n in e["edge"]}
    svg = svgs[1]
    assert "tier 1" in svg
    # TSV markers: one hollow square per path endpoint
    assert svg.count("<rect") == 2 * len(tier1_edges)
    # node dots only for incident nodes (plus possible bump/point markers)
    assert svg.count('r="0.7"') == len(incident)  # cell=2.0 -> node radius 0.7


def test_bump_markers_match_layer_transitions(multi_tier_doc):
    transitions = 0
    for e in multi_tier_doc["edges"]:
        path = e["path"]
        transitions += sum(1 for a, b in zip(path, path[1:]) if a[2] != b[2])
    joined = "".join(render_tiers(multi_tier_doc))
    assert joined.count('fill="#ff7f0e"') == transitions


def test_render_deterministic(multi_tier_doc):
    assert render_tiers(multi_tier_doc) == render_tiers(multi_tier_doc)


def test_schema_mismatch_rejected(surface_doc, tmp_path):
    bad = dict(surface_doc, schema="routed-layout/999")
    with pytest.raises(SchemaError):
        render_tiers(bad)
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    with pytest.raises(SchemaError):
        load_layout_doc(p)


def test_empty_higher_tier_rejected(surface_doc):
    bad = dict(surface_doc, num_tiers=surface_doc["num_tiers"] + 1)
    with pytest.raises(ValueError):
        render_tiers(bad)


def test_render_to_files_roundtrip(multi_tier_doc, tmp_path):
    paths = render_to_files(multi_tier_doc, tmp_path)
    assert len(paths) == multi_tier_doc["num_tiers"]
    svgs = render_tiers(multi_tier_doc)
    for path, svg in zip(paths, svgs):
        assert open(path).read() == svg
    # re-render is byte-identical
    paths2 = render_to_files(multi_tier_doc, tmp_path)
    for path in paths2:
        assert open(path).read() == svgs[paths2.index(path)]


def test_load_layout_doc(surface_doc, tmp_path):
    p = tmp_path / "ok.json"
    p.write_text(json.dumps(surface_doc))
    doc = load_layout_doc(p)
    assert doc["schema"] == SCHEMA
    assert render_tiers(doc) == render_tiers(surface_doc)
