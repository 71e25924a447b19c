"""Deterministic SVG rendering of a routed layout, one drawing per tier.

Layer 0 traces are solid, layer 1 dashed; bump transitions get filled dots,
TSV terminals hollow squares, and each drawing carries its tier index.
"""

from __future__ import annotations

import json

from .routing import SCHEMA


class SchemaError(ValueError):
    """Layout document has the wrong schema version."""


_STYLE = {
    "data": "#1f77b4",
    "trace0": "#222222",
    "trace1": "#d62728",
    "bump": "#ff7f0e",
    "tsv": "#2ca02c",
}


def _fmt(v) -> str:
    return f"{v:.1f}".rstrip("0").rstrip(".")


def load_layout_doc(path) -> dict:
    with open(path) as f:
        doc = json.load(f)
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f"expected schema {SCHEMA}, got {doc.get('schema')!r}")
    return doc


def render_tiers(doc: dict, cell: float = 2.0) -> list[str]:
    """One SVG string per tier, in tier order."""
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f"expected schema {SCHEMA}, got {doc.get('schema')!r}")
    num_tiers = doc["num_tiers"]
    by_tier = [[] for _ in range(num_tiers)]
    for e in doc["edges"]:
        by_tier[e["tier"]].append(e)
    for t in range(1, num_tiers):
        if not by_tier[t]:
            raise ValueError(f"tier {t} holds no edges; layout is malformed")
    positions = {int(k): tuple(v) for k, v in doc["positions"].items()}
    out = []
    for t in range(num_tiers):
        if t == 0:
            nodes = sorted(positions)
        else:
            nodes = sorted({n for e in by_tier[t] for n in e["edge"]})
        out.append(_render_tier(t, by_tier[t], {n: positions[n] for n in nodes},
                                doc["grid_size"], cell))
    return out


def _render_tier(tier_index, edges, positions, grid_size, cell):
    xs = [p[0] for p in positions.values()] or [0]
    ys = [p[1] for p in positions.values()] or [0]
    pad = 4
    x0, y0 = min(xs) - pad, min(ys) - pad
    w = (max(xs) - x0 + pad) * cell
    h = (max(ys) - y0 + pad) * cell

    def pt(x, y):
        return (x - x0) * cell, (y - y0) * cell

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(w)} {_fmt(h + 14)}">']
    parts.append(f'<text x="4" y="{_fmt(h + 11)}" font-size="10" '
                 f'font-family="monospace">tier {tier_index}</text>')
    for e in sorted(edges, key=lambda e: tuple(e["edge"])):
        path = [tuple(c) for c in e["path"]]
        # split into same-layer runs, drawing each with its layer style
        run = [path[0]]
        for cellpt in path[1:]:
            if cellpt[2] != run[-1][2]:
                parts.append(_polyline(run, pt, cell))
                bx, by = pt(cellpt[0], cellpt[1])
                parts.append(f'<circle cx="{_fmt(bx)}" cy="{_fmt(by)}" r="{_fmt(cell * 0.45)}" '
                             f'fill="{_STYLE["bump"]}"/>')
                run = [cellpt]
            else:
                run.append(cellpt)
        parts.append(_polyline(run, pt, cell))
        if tier_index >= 1:
            for x, y, _ in (path[0], path[-1]):
                tx, ty = pt(x, y)
                s = cell * 0.9
                parts.append(f'<rect x="{_fmt(tx - s / 2)}" y="{_fmt(ty - s / 2)}" '
                             f'width="{_fmt(s)}" height="{_fmt(s)}" fill="none" '
                             f'stroke="{_STYLE["tsv"]}" stroke-width="0.6"/>')
    for n in sorted(positions):
        x, y = pt(*positions[n])
        parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(cell * 0.35)}" '
                     f'fill="{_STYLE["data"]}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _polyline(run, pt, cell):
    if len(run) < 2:
        x, y = pt(run[0][0], run[0][1])
        return (f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(cell * 0.2)}" '
                f'fill="{_STYLE["trace0"]}"/>')
    z = run[0][2]
    pts = " ".join("{},{}".format(_fmt(px), _fmt(py))
                   for px, py in (pt(x, y) for x, y, _ in run))
    dash = '' if z == 0 else ' stroke-dasharray="3,2"'
    color = _STYLE["trace0"] if z == 0 else _STYLE["trace1"]
    return (f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="0.8"{dash}/>')


def render_to_files(doc: dict, out_dir, stem: str = "tier") -> list[str]:
    import os
    svgs = render_tiers(doc)
    paths = []
    for t, svg in enumerate(svgs):
        path = os.path.join(out_dir, f"{stem}{t}.svg")
        tmp = path + ".tmp"
        with open(tmp, "w") as f:
            f.write(svg)
        os.replace(tmp, path)
        paths.append(path)
    return paths
