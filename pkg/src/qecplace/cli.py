"""Command-line front end: generate codes, run place-and-route, render
layouts, emit reports and sweeps, and estimate distances.

Exit codes: 0 success, 3 parse error, 4 capacity error, 5 routing failure,
6 configuration error.
"""

from __future__ import annotations

import functools
import json
import os
import sys

import click

from . import report as rpt
from .codes import CodeError, ParseError, load_code, save_code
from .distance import estimate_distance
from .metrics import ComplexityModel, HardwareParams, sweep_model, PARAM_NAMES
from .placement import CapacityError
from .render import SchemaError, load_layout_doc, render_to_files
from .routing import RoutingError

EXIT_PARSE = 3
EXIT_CAPACITY = 4
EXIT_ROUTING = 5
EXIT_CONFIG = 6


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def pipeline_errors(fn):
    @functools.wraps(fn)
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, SchemaError, json.JSONDecodeError, FileNotFoundError) as exc:
            _fail(EXIT_PARSE, str(exc))
        except CapacityError as exc:
            _fail(EXIT_CAPACITY, str(exc))
        except RoutingError as exc:
            detail = f"; unrouted edges: {exc.unrouted}" if exc.unrouted else ""
            _fail(EXIT_ROUTING, f"{exc}{detail}")
        except (rpt.ConfigError, CodeError, ValueError) as exc:
            _fail(EXIT_CONFIG, str(exc))
    return wrapped


def _parse_code_spec(code: str) -> dict:
    """Preset name, matrix file path, or inline JSON object."""
    if code.lstrip().startswith("{"):
        spec = json.loads(code)
        if not isinstance(spec, dict):
            raise rpt.ConfigError("inline code spec must be a JSON object")
        return spec
    if code in rpt.BUNDLED:
        return {"family": code}
    if os.path.exists(code):
        return {"file": code}
    raise rpt.ConfigError(
        f"code spec {code!r} is neither a bundled name {rpt.BUNDLED}, "
        f"an existing file, nor inline JSON")


def _out_dir(out):
    os.makedirs(out, exist_ok=True)
    return out


_OUT_OPTION = click.option(
    "--out-dir", envvar="QECPLACE_OUT", default=".", show_default=True,
    help="Output directory (env: QECPLACE_OUT).")


def _config_options(fn):
    opts = [
        click.option("--seed", type=int, default=None),
        click.option("--placement",
                     type=click.Choice(rpt.PLACEMENT_MODES), default=None),
        click.option("--grid-size", type=int, default=None),
        click.option("--edge-margin", type=int, default=None),
        click.option("--node-size", type=int, default=None),
        click.option("--max-bumps", type=int, default=None),
        click.option("--max-length-factor", type=float, default=None),
        click.option("--max-tsvs", type=int, default=None),
        click.option("--max-tiers", type=int, default=None),
        click.option("--weights", default=None,
                     help="Four comma-separated weights."),
        click.option("--optimistic", default=None,
                     help="Four comma-separated optimistic values."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _build_run_config(config_file, code, overrides) -> rpt.RunConfig:
    for key in ("weights", "optimistic"):
        if overrides.get(key) is not None:
            overrides[key] = [float(v) for v in overrides[key].split(",")]
    if config_file:
        if code:
            overrides["code"] = _parse_code_spec(code)
        return rpt.load_run_config(config_file, overrides)
    if not code:
        raise rpt.ConfigError("either --config or a code spec is required")
    doc = {"code": _parse_code_spec(code)}
    doc.update({k: v for k, v in overrides.items() if v is not None})
    return rpt.RunConfig.from_dict(doc)


@click.group()
def main():
    """Place-and-route toolkit for CSS code connectivity graphs."""


@main.command()
@click.argument("code")
@click.option("--seed", type=int, default=0, show_default=True)
@_OUT_OPTION
@click.option("-o", "--output", default=None, help="Output file name.")
@pipeline_errors
def generate(code, seed, out_dir, output):
    """Build a code (preset name or inline JSON spec) and save its matrix file."""
    bundle = rpt.build_code(_parse_code_spec(code), seed=seed)
    name = output or f"{bundle.family}_{bundle.code.n}_{bundle.code.k}.json"
    path = os.path.join(_out_dir(out_dir), name)
    save_code(path, bundle.code, bundle.positions)
    click.echo(f"wrote {path} (n={bundle.code.n}, k={bundle.code.k})")


@main.command()
@click.argument("code", required=False)
@click.option("--config", "config_file", default=None,
              help="Run-config file; flags override its values.")
@_config_options
@_OUT_OPTION
@pipeline_errors
def layout(code, config_file, out_dir, **overrides):
    """Run the full pipeline on one code and write layout + report files."""
    cfg = _build_run_config(config_file, code, overrides)
    report, routed = rpt.run_entry(cfg)
    out = _out_dir(cfg.out_dir or out_dir)
    stem = f"{report.family}_{report.n}_{report.seed}"
    layout_path = os.path.join(out, f"{stem}.layout.json")
    rpt.atomic_write(layout_path, routed.serialize())
    row = rpt.report_row(report)
    rpt.atomic_write(os.path.join(out, f"{stem}.report.csv"),
                     rpt.rows_to_csv([row]))
    rpt.append_runtime_log(out, row, len(routed.routed_edges))
    click.echo(f"{report.family} n={report.n} k={report.k} d={report.d} "
               f"eta={report.efficiency} c_hw={report.c_hw:.4f} "
               f"tiers={int(report.params.q_tiers)} "
               f"edges={len(routed.routed_edges)} "
               f"runtime={report.runtime_seconds:.2f}s")
    click.echo(f"wrote {layout_path}")


@main.command()
@click.argument("layout_file")
@_OUT_OPTION
@pipeline_errors
def render(layout_file, out_dir):
    """Render a layout file to one SVG per tier."""
    doc = load_layout_doc(layout_file)
    stem = os.path.splitext(os.path.basename(layout_file))[0] + ".tier"
    paths = render_to_files(doc, _out_dir(out_dir), stem=stem)
    for p in paths:
        click.echo(f"wrote {p}")


@main.command()
@click.argument("manifest_file")
@_OUT_OPTION
@pipeline_errors
def report(manifest_file, out_dir):
    """Run a batch manifest and emit a summary table plus scatter data."""
    manifest = rpt.load_manifest(manifest_file)
    results = rpt.run_batch(manifest)
    out = _out_dir(out_dir)
    rows = [r["row"] for r in results if r["ok"]]
    failures = [r for r in results if not r["ok"]]
    rpt.atomic_write(os.path.join(out, "report.csv"), rpt.rows_to_csv(rows))
    rpt.atomic_write(os.path.join(out, "summary.txt"), rpt.summary_table(rows))
    rpt.atomic_write(os.path.join(out, "scatter.csv"), rpt.scatter_rows(rows))
    for r in results:
        if r["ok"]:
            rpt.append_runtime_log(out, r["row"], r["edges"])
    click.echo(rpt.summary_table(rows), nl=False)
    for f in failures:
        click.echo(f"failed: {f['config']['code']} -> {f['error']}", err=True)
    click.echo(f"{len(rows)} succeeded, {len(failures)} failed; wrote {out}/report.csv")


@main.command()
@click.argument("kind", type=click.Choice(["weights", "optimistic", "bb_aspect"]))
@click.option("--reports", "reports_file", default=None,
              help="report.csv to re-score (weights/optimistic kinds).")
@click.option("--parameter", default=None,
              type=click.Choice(PARAM_NAMES))
@click.option("--multipliers", default="0.5,1.0,1.5", show_default=True)
@click.option("--codes", default="gross",
              help="Comma-separated bicycle code specs (bb_aspect kind).")
@click.option("--seed", type=int, default=0, show_default=True)
@_OUT_OPTION
@pipeline_errors
def sweep(kind, reports_file, parameter, multipliers, codes, seed, out_dir):
    """Re-score reports under model variants, or compare BB placements."""
    out = _out_dir(out_dir)
    if kind == "bb_aspect":
        specs = [_parse_code_spec(c) for c in codes.split(",")]
        rows = rpt.bb_aspect_sweep(
            specs, base=rpt.RunConfig(code=specs[0], seed=seed))
        cols = list(rows[0])
        text = ",".join(cols) + "\n" + "\n".join(
            ",".join(str(r[c]) for c in cols) for r in rows) + "\n"
        rpt.atomic_write(os.path.join(out, "sweep_bb_aspect.csv"), text)
        click.echo(text, nl=False)
        return
    if not reports_file or not parameter:
        raise rpt.ConfigError(f"{kind} sweep needs --reports and --parameter")
    import csv as _csv
    with open(reports_file) as f:
        rows = list(_csv.DictReader(f))
    mults = [float(v) for v in multipliers.split(",")]
    param = parameter if kind == "optimistic" else f"weights:{parameter}"
    reports = [rpt.CodeReport(
        family=r["family"], n=int(r["n"]), k=int(r["k"]), d=int(r["d"]),
        efficiency=float(r["eta"]),
        params=HardwareParams(
            float(r["q_tiers"]), float(r["q_length"]),
            float(r["q_bumps"]), float(r["q_tsvs"])),
        components=(), c_hw=float(r["c_hw"]),
        runtime_seconds=float(r["runtime_seconds"]), seed=int(r["seed"]))
        for r in rows]
    grid = sweep_model(reports, param, mults, ComplexityModel())
    lines = ["multiplier,family,n,seed,c_hw"]
    for mult in mults:
        variant = grid[mult]
        for r in variant:
            lines.append(f"{mult},{r.family},{r.n},{r.seed},{round(r.c_hw, 6)}")
    text = "\n".join(lines) + "\n"
    rpt.atomic_write(os.path.join(out, f"sweep_{kind}_{parameter}.csv"), text)
    click.echo(text, nl=False)


@main.command()
@click.argument("code")
@click.option("--trial-budget", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@pipeline_errors
def distance(code, trial_budget, seed):
    """Estimate the distance of a code (bundled name, file, or inline JSON)."""
    bundle = rpt.build_code(_parse_code_spec(code), seed=seed)
    est = estimate_distance(bundle.code, trial_budget=trial_budget, seed=seed)
    click.echo(f"n={bundle.code.n} k={bundle.code.k} d={est.value} "
               f"({est.kind}, trials={est.trials_used})")


if __name__ == "__main__":
    main()
