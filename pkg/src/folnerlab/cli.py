"""Command-line interface.

One subcommand per workflow step: `generate` emits graph files, `profile`
and the analysis commands consume them, `powers` / `nprod` work on group
models directly, and `reproduce` runs the bundled recipes.  Ad-hoc commands
stamp their CSVs with a digest of their own parameters, so any artifact can
be traced to the invocation that wrote it; `reproduce` artifacts carry the
config hash instead.
"""

from __future__ import annotations

import functools
import hashlib
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import click

from .analysis import (
    doubling_constant,
    dyadic_subsequence,
    growth_exponent_fit,
    shell_alpha,
    verify_sphere_bound,
)
from .config import load_config
from .ergodic import GOLDEN_ANGLES, TorusAction, ergodic_trace
from .errors import (
    BudgetExceededError,
    ConfigError,
    GraphFormatError,
    NotGeneratingError,
)
from .generators import (
    DEFAULT_VERTEX_BUDGET,
    TreeChainSpec,
    heisenberg_graph,
    lattice_graph,
    stairway_strip,
    stretched_tree_chain,
)
from .graphio import dump_graph, load_graph
from .groups import GroupModel, heisenberg_model, zd_model
from .products import (
    DEFAULT_ELEMENT_BUDGET,
    folner_ratios,
    product_powers,
    varying_products,
)
from .recipes import RECIPES
from .runner import _cell, reproduce as run_recipe, run_experiment
from .space import Graph, sample_centers, volume_profile

__all__ = ["main"]


def _friendly(fn):
    """Turn domain errors into clean CLI failures instead of tracebacks."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (
            ConfigError,
            GraphFormatError,
            BudgetExceededError,
            NotGeneratingError,
            ValueError,
            KeyError,
        ) as exc:
            message = exc.args[0] if exc.args else str(exc)
            raise click.ClickException(str(message))

    return wrapper


def _digest(command: str, **params: Any) -> str:
    payload = json.dumps({"command": command, **params}, sort_keys=True)
    return hashlib.sha256(payload.encode("ascii")).hexdigest()[:16]


def _csv_text(digest: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    import csv as _csv

    buf = io.StringIO()
    buf.write(f"# config {digest}\n")
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="ascii")


def _resolve_model(group: str, d: int) -> GroupModel:
    if group == "zd":
        return zd_model(d)
    if group == "heisenberg":
        return heisenberg_model()
    raise click.ClickException(f"unknown group {group!r}")


def _parse_set(model: GroupModel, text: str) -> tuple[tuple[int, ...], ...]:
    """A generating set given as a named label or a JSON array of tuples."""
    if not text.lstrip().startswith("["):
        return model.generating_set(text)
    raw = json.loads(text)
    if not isinstance(raw, list) or not all(isinstance(g, list) for g in raw):
        raise click.ClickException("expected a JSON array of integer arrays")
    return tuple(tuple(int(c) for c in g) for g in raw)


def _centers(
    graph: Graph, labels: Sequence[str], sample: int, seed: int
) -> list[tuple[str, int]]:
    if sample > 0:
        by_vertex = {v: lab for lab, v in sorted(graph.basepoints.items())}
        return [
            (by_vertex.get(v, f"v{v}"), v)
            for v in sample_centers(graph, sample, seed)
        ]
    if not labels:
        return sorted(graph.basepoints.items())
    out = []
    for label in labels:
        if label not in graph.basepoints:
            raise click.ClickException(f"unknown basepoint label {label!r}")
        out.append((label, graph.basepoints[label]))
    return out


@click.group()
@click.option("--seed", type=int, default=0, show_default=True, help="PRNG seed for center sampling.")
@click.option("--budget-vertices", type=int, default=DEFAULT_VERTEX_BUDGET, show_default=True, help="Hard cap on constructed vertices.")
@click.option("--budget-elements", type=int, default=DEFAULT_ELEMENT_BUDGET, show_default=True, help="Hard cap on enumerated group elements.")
@click.option("--out", type=str, default=None, help="Output file (or directory for reproduce/run).")
@click.pass_context
def main(ctx: click.Context, seed: int, budget_vertices: int, budget_elements: int, out: str | None) -> None:
    """Growth, shells, and ergodic averages on doubling graphs and groups."""
    ctx.obj = {
        "seed": seed,
        "budget_vertices": budget_vertices,
        "budget_elements": budget_elements,
        "out": out,
    }


@main.command()
@click.option("--family", type=click.Choice(["lattice", "heisenberg", "tree-chain", "stairway"]), required=True)
@click.option("--d", type=int, default=2, show_default=True, help="Lattice rank.")
@click.option("--radius", type=int, default=8, show_default=True, help="Word-ball radius (lattice / heisenberg).")
@click.option("--generating-set", default="standard", show_default=True)
@click.option("--a", type=int, default=2, show_default=True, help="Tree-chain stretch.")
@click.option("--b", type=int, default=3, show_default=True, help="Tree-chain valence.")
@click.option("--blocks", type=int, default=6, show_default=True, help="Tree-chain block count.")
@click.option("--levels", type=int, default=8, show_default=True, help="Stairway dyadic levels.")
@click.pass_context
@_friendly
def generate(ctx, family, d, radius, generating_set, a, b, blocks, levels):
    """Build a space and emit it in the graph file format."""
    budget = ctx.obj["budget_vertices"]
    if family == "lattice":
        graph = lattice_graph(d, generating_set, radius, budget).graph
    elif family == "heisenberg":
        graph = heisenberg_graph(generating_set, radius, budget).graph
    elif family == "tree-chain":
        graph = stretched_tree_chain(TreeChainSpec(a, b, blocks), budget)
    else:
        graph = stairway_strip(levels, budget).graph
    _emit(dump_graph(graph), ctx.obj["out"])


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--depth", type=int, required=True)
@click.option("--center", "center_labels", multiple=True, help="Basepoint label (repeatable; default all).")
@click.option("--sample", type=int, default=0, show_default=True, help="Sample this many centers instead.")
@click.pass_context
@_friendly
def profile(ctx, graph_path, depth, center_labels, sample):
    """Ball and sphere volumes around the chosen centers."""
    graph = load_graph(graph_path)
    centers = _centers(graph, center_labels, sample, ctx.obj["seed"])
    digest = _digest("profile", graph=str(graph_path), depth=depth, centers=[c for c, _ in centers])
    rows = []
    for label, v in centers:
        p = volume_profile(graph, v, depth)
        spheres = p.sphere
        for r in range(p.depth + 1):
            rows.append((label, r, p.ball[r], spheres[r] if r < p.depth else ""))
    _emit(_csv_text(digest, ("center", "r", "ball", "sphere"), rows), ctx.obj["out"])


def _powers_rows(sizes: Sequence[int], ratios: Sequence[Fraction]) -> list[tuple]:
    rows = []
    for n, size in enumerate(sizes):
        delta = size - sizes[n - 1] if n > 0 else size
        ratio = ratios[n] if n < len(ratios) else ""
        rows.append((n, size, delta, ratio))
    return rows


@main.command()
@click.option("--group", type=click.Choice(["zd", "heisenberg"]), default="zd", show_default=True)
@click.option("--d", type=int, default=2, show_default=True)
@click.option("--set", "set_text", default="standard", show_default=True, help="Named set or JSON array of tuples.")
@click.option("--n-max", type=int, required=True)
@click.pass_context
@_friendly
def powers(ctx, group, d, set_text, n_max):
    """Exact sizes of the powers U^n of one generating set."""
    model = _resolve_model(group, d)
    gen = _parse_set(model, set_text)
    seq = product_powers(model, gen, n_max, ctx.obj["budget_elements"])
    digest = _digest("powers", group=group, d=d, set=sorted(gen), n_max=n_max)
    rows = _powers_rows(seq.sizes, folner_ratios(seq))
    _emit(_csv_text(digest, ("n", "size", "delta_size", "folner_ratio"), rows), ctx.obj["out"])


@main.command()
@click.option("--group", type=click.Choice(["zd", "heisenberg"]), default="zd", show_default=True)
@click.option("--d", type=int, default=2, show_default=True)
@click.option("--factors", "factors_text", required=True, help="JSON array of factor sets (arrays of tuples).")
@click.option("--inner", "inner_text", required=True, help="Certified subset of every factor.")
@click.option("--outer", "outer_text", required=True, help="Certified superset of every factor.")
@click.pass_context
@_friendly
def nprod(ctx, group, d, factors_text, inner_text, outer_text):
    """Exact sizes of products of varying factors N_n = U_1 ... U_n."""
    model = _resolve_model(group, d)
    raw = json.loads(factors_text)
    if not isinstance(raw, list):
        raise click.ClickException("expected a JSON array of factor sets")
    factors = [tuple(tuple(int(c) for c in g) for g in factor) for factor in raw]
    inner = _parse_set(model, inner_text)
    outer = _parse_set(model, outer_text)
    seq = varying_products(model, factors, inner, outer, element_budget=ctx.obj["budget_elements"])
    digest = _digest("nprod", group=group, d=d, factors=[sorted(f) for f in factors])
    rows = _powers_rows(seq.sizes, folner_ratios(seq))
    _emit(_csv_text(digest, ("n", "size", "delta_size", "folner_ratio"), rows), ctx.obj["out"])


def _graph_profiles(ctx, graph_path, depth, center_labels, sample):
    graph = load_graph(graph_path)
    centers = _centers(graph, center_labels, sample, ctx.obj["seed"])
    return centers, [volume_profile(graph, v, depth) for _, v in centers]


@main.command("shell-report")
@click.option("--graph", "graph_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--depth", type=int, required=True)
@click.option("--center", "center_labels", multiple=True)
@click.option("--sample", type=int, default=0, show_default=True)
@click.option("--k-min", type=int, default=5, show_default=True)
@click.option("--n-max", type=int, default=None)
@click.option("--record-all", is_flag=True, help="Emit every tested pair, not just the worst.")
@click.pass_context
@_friendly
def shell_report(ctx, graph_path, depth, center_labels, sample, k_min, n_max, record_all):
    """Shell-comparison sweep: alpha, delta, and the worst pair."""
    centers, profiles = _graph_profiles(ctx, graph_path, depth, center_labels, sample)
    report = shell_alpha(profiles, k_min=k_min, n_max=n_max, record_all=record_all)
    digest = _digest("shell-report", graph=str(graph_path), depth=depth, centers=[c for c, _ in centers], k_min=k_min, n_max=report.n_max)
    rows = [
        (r.center, r.n, r.k, r.c_lo, r.c_hi, "" if r.ratio is None else r.ratio)
        for r in report.records
    ]
    _emit(_csv_text(digest, ("center", "n", "k", "c_lo", "c_hi", "ratio"), rows), ctx.obj["out"])
    summary = {
        "alpha": _cell(report.alpha),
        "delta": report.delta,
        "fitted_C": report.fitted_constant,
        "pass": report.alpha > 0,
    }
    click.echo(json.dumps(summary, sort_keys=True))


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--depth", type=int, required=True)
@click.option("--center", "center_labels", multiple=True)
@click.option("--sample", type=int, default=0, show_default=True)
@click.option("--k-min", type=int, default=5, show_default=True)
@click.option("--n-max", type=int, default=None)
@click.option("--slope-tol", type=float, default=0.05, show_default=True)
@click.pass_context
@_friendly
def verify(ctx, graph_path, depth, center_labels, sample, k_min, n_max, slope_tol):
    """Measure alpha, then verify the n^(-delta) sphere bound it implies."""
    centers, profiles = _graph_profiles(ctx, graph_path, depth, center_labels, sample)
    shell = shell_alpha(profiles, k_min=k_min, n_max=n_max)
    report = verify_sphere_bound(
        profiles, shell.delta, n_range=(1, min(shell.n_max, depth - 1)),
        slope_tolerance=slope_tol,
    )
    digest = _digest("verify", graph=str(graph_path), depth=depth, centers=[c for c, _ in centers], delta=shell.delta)
    rows = list(zip(range(report.n_lo, report.n_hi + 1), report.constants))
    _emit(_csv_text(digest, ("n", "constant"), rows), ctx.obj["out"])
    summary = {
        "alpha": _cell(shell.alpha),
        "delta": shell.delta,
        "fitted_C": report.fitted_constant,
        "trend_slope": report.trend_slope,
        "pass": report.passed,
    }
    click.echo(json.dumps(summary, sort_keys=True))
    ctx.exit(0 if report.passed else 1)


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--depth", type=int, required=True)
@click.option("--center", "center_labels", multiple=True)
@click.option("--sample", type=int, default=0, show_default=True)
@click.option("--i-max", type=int, default=None)
@click.pass_context
@_friendly
def dyadic(ctx, graph_path, depth, center_labels, sample, i_max):
    """Dyadic radius selection certified against 2 C_D mu(B)/2^i."""
    centers, profiles = _graph_profiles(ctx, graph_path, depth, center_labels, sample)
    slack = 2 * doubling_constant(profiles, depth // 2)
    rows = []
    all_ok = True
    for (label, _), p in zip(centers, profiles):
        sel = dyadic_subsequence(p, slack, i_max)
        all_ok = all_ok and sel.all_certified
        for rec in sel.records:
            rows.append((label, rec.i, rec.radius, rec.sphere, rec.ball, rec.bound, rec.certified))
    digest = _digest("dyadic", graph=str(graph_path), depth=depth, centers=[c for c, _ in centers])
    _emit(_csv_text(digest, ("center", "i", "radius", "sphere", "ball", "bound", "certified"), rows), ctx.obj["out"])
    click.echo(json.dumps({"doubling_slack": _cell(slack), "pass": all_ok}, sort_keys=True))
    ctx.exit(0 if all_ok else 1)


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--depth", type=int, required=True)
@click.option("--center", "center_labels", multiple=True)
@click.option("--dyadic-radii", is_flag=True, help="Fit at radii 8, 16, 32, ... only.")
@click.option("--min-points", type=int, default=8, show_default=True)
@click.pass_context
@_friendly
def fit(ctx, graph_path, depth, center_labels, dyadic_radii, min_points):
    """Growth exponent: least-squares slope of log volume vs log radius."""
    centers, profiles = _graph_profiles(ctx, graph_path, depth, center_labels, 0)
    radii = None
    if dyadic_radii:
        radii = [2**i for i in range(3, depth.bit_length()) if 2**i <= depth]
    out = {}
    for (label, _), p in zip(centers, profiles):
        result = growth_exponent_fit(p.ball, radii=radii, min_points=min_points)
        out[label] = {
            "exponent": result.exponent,
            "intercept": result.intercept,
            "residual_rms": result.residual_rms,
        }
    click.echo(json.dumps(out, sort_keys=True))


@main.command()
@click.option("--observable", default="cos_x", show_default=True)
@click.option("--start", default="0.1,0.2", show_default=True, help="Start point on the 2-torus, comma separated.")
@click.option("--n-max", type=int, default=200, show_default=True)
@click.option("--preset", type=click.Choice(["golden"]), default="golden", show_default=True)
@click.pass_context
@_friendly
def ergodic(ctx, observable, start, n_max, preset):
    """Ball averages of a torus rotation along word-ball powers of Z^2."""
    point = tuple(float(v) for v in start.split(","))
    if len(point) != 2:
        raise click.ClickException("start must have two coordinates")
    model = zd_model(2)
    seq = product_powers(model, "standard", n_max, ctx.obj["budget_elements"])
    trace = ergodic_trace(TorusAction(GOLDEN_ANGLES), seq, observable, point)
    digest = _digest("ergodic", observable=observable, start=list(point), n_max=n_max, preset=preset)
    rows = list(zip(range(len(trace.averages)), trace.averages, trace.errors))
    _emit(_csv_text(digest, ("n", "average", "error"), rows), ctx.obj["out"])
    click.echo(json.dumps({"final_error": trace.final_error, "envelope": trace.envelope()}, sort_keys=True))


@main.command()
@click.argument("name", required=False)
@click.option("--list", "list_recipes", is_flag=True, help="List recipe names and claims.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Run an explicit config file instead of a bundled recipe.")
@click.pass_context
@_friendly
def reproduce(ctx, name, list_recipes, config_path):
    """Run a bundled recipe (or a config file) and write its artifacts."""
    if list_recipes:
        for recipe_name in sorted(RECIPES):
            click.echo(f"{recipe_name}: {RECIPES[recipe_name].claim}")
        return
    if config_path is not None:
        result = run_experiment(load_config(config_path), out_dir=ctx.obj["out"])
    elif name is not None:
        result = run_recipe(name, out_dir=ctx.obj["out"])
    else:
        raise click.ClickException("give a recipe name, --config FILE, or --list")
    click.echo(json.dumps(result.summary, sort_keys=True))
    ctx.exit(0 if result.passed else 1)
