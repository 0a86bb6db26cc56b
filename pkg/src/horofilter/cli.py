"""Command-line entry point.

Thin dispatch over the core package: parse flags, call one operation, write
its canonical file format. Exit codes: 0 success, 1 domain error, 2 usage
error. Every command is deterministic in its inputs and seeds, and no
command mutates its input files. HOROFILTER_THREADS caps internal worker
pools without changing any output byte.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import __version__
from .boundary import MultiAnchorConfig, busemann_field, field_to_csv, resolve_anchor
from .errors import HorofilterError
from .filtering import (
    FilterConfig,
    MixingMatrix,
    apply_stacked,
    build_operator,
    mixing_from_text,
    signal_from_csv,
    signal_to_csv,
    weights_for,
    weights_to_csv,
)
from .generators import GenSpec, generate
from .graphs import dump_edge_list, load_edge_list
from .hyperbolicity import analyze_graph, delta_exact
from .benchmarks import bench_to_csv, run_bench
from .spectral import compute_spectral_report, evaluate_certificates
from .sweep import SweepPlan, default_plan, replay, run_sweep

_FAMILY_CHOICES = {
    "path": "path",
    "cycle": "cycle",
    "star": "star",
    "balanced-tree": "balanced_tree",
    "grid": "grid",
    "random-tree": "random_tree",
    "erdos-renyi": "erdos_renyi",
}


def _domain_errors(fn):
    """Map HorofilterError to exit code 1 (usage errors exit 2 via click)."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except HorofilterError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _read_graph(path: str):
    return load_edge_list(Path(path).read_text())


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _int_list(_ctx, _param, value):
    if value is None:
        return None
    try:
        return tuple(int(x) for x in value.split(","))
    except ValueError:
        raise click.UsageError(f"expected a comma-separated integer list, got {value!r}")


def _anchor_options(fn):
    fn = click.option("--base", type=int, default=None, help="Anchor base vertex.")(fn)
    fn = click.option("--target", type=int, default=None, help="Anchor target vertex.")(fn)
    fn = click.option(
        "--anchors",
        "anchors_path",
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help="Multi-anchor JSON config (base + target/alpha pairs).",
    )(fn)
    return fn


def _check_anchor_flags(base, target, anchors_path) -> None:
    if anchors_path is not None and (base is not None or target is not None):
        raise click.UsageError("--anchors cannot be combined with --base/--target")
    if base is not None and target is not None and base == target:
        raise click.UsageError("--base and --target must differ")


@click.group()
@click.version_option(version=__version__, prog_name="horofilter")
def main() -> None:
    """Boundary-weighted graph filters with spectral certificates."""


@main.command()
@click.option("--family", type=click.Choice(sorted(_FAMILY_CHOICES)), required=True)
@click.option("--n", type=int, default=None, help="Vertex count (path/cycle/random-tree/erdos-renyi).")
@click.option("--leaves", type=int, default=None, help="Leaf count (star).")
@click.option("--branching", type=int, default=None, help="Branching factor (balanced-tree).")
@click.option("--depth", type=int, default=None, help="Depth (balanced-tree).")
@click.option("--rows", type=int, default=None, help="Row count (grid).")
@click.option("--cols", type=int, default=None, help="Column count (grid).")
@click.option("--p", type=float, default=None, help="Edge probability (erdos-renyi).")
@click.option("--seed", type=int, default=None, help="Seed for random families.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_domain_errors
def gen(family, n, leaves, branching, depth, rows, cols, p, seed, out) -> None:
    """Generate a graph family as an edge-list file."""
    params = {
        key: value
        for key, value in (
            ("n", n),
            ("leaves", leaves),
            ("branching", branching),
            ("depth", depth),
            ("rows", rows),
            ("cols", cols),
            ("p", p),
        )
        if value is not None
    }
    g = generate(GenSpec(_FAMILY_CHOICES[family], params, seed=seed))
    _write_out(dump_edge_list(g), out)


@main.command()
@click.argument("graph", type=click.Path(exists=True, dir_okay=False))
@click.option("--exact-delta", "exact", is_flag=True, default=False,
              help="Exact four-point delta over all quadruples (the default).")
@click.option("--sample", "samples", type=int, default=None,
              help="Sampled lower bound on delta with this many quadruples.")
@click.option("--seed", type=int, default=None, help="Seed for sampled mode.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_domain_errors
def analyze(graph, exact, samples, seed, out) -> None:
    """Graph summary: size, degree, diameter, hyperbolicity."""
    if exact and samples is not None:
        raise click.UsageError("--exact-delta and --sample are mutually exclusive")
    g = _read_graph(graph)
    doc = analyze_graph(
        g,
        exact=samples is None,
        samples=samples if samples is not None else 2000,
        seed=seed,
    )
    _write_out(json.dumps(doc, indent=2) + "\n", out)


@main.command()
@click.argument("graph", type=click.Path(exists=True, dir_okay=False))
@_anchor_options
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Output CSV (single anchor).")
@click.option("--out-dir", type=click.Path(file_okay=False), default=None,
              help="Output directory (multi-anchor: one CSV per anchor).")
@_domain_errors
def busemann(graph, base, target, anchors_path, out, out_dir) -> None:
    """Busemann height field(s) as vertex,beta CSV."""
    _check_anchor_flags(base, target, anchors_path)
    g = _read_graph(graph)
    if anchors_path is not None:
        if out_dir is None:
            raise click.UsageError("--anchors needs --out-dir for the per-anchor CSVs")
        mix = MultiAnchorConfig.from_json(Path(anchors_path).read_text())
        directory = Path(out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        for m, anchor in enumerate(mix.anchors()):
            path = directory / f"field_{m}.csv"
            path.write_text(field_to_csv(busemann_field(g, anchor)))
            click.echo(str(path))
        return
    anchor = resolve_anchor(g, base, target)
    _write_out(field_to_csv(busemann_field(g, anchor)), out)


@main.command()
@click.argument("graph", type=click.Path(exists=True, dir_okay=False))
@_anchor_options
@click.option("--alpha", type=float, default=None, help="Scale (single-anchor mode).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_domain_errors
def weights(graph, base, target, anchors_path, alpha, out) -> None:
    """Per-edge boundary weights as u,v,gap,weight CSV."""
    _check_anchor_flags(base, target, anchors_path)
    g = _read_graph(graph)
    if anchors_path is not None:
        if alpha is not None:
            raise click.UsageError("--alpha is fixed per anchor by the config in multi mode")
        ew = weights_for(g, mix=MultiAnchorConfig.from_json(Path(anchors_path).read_text()))
    else:
        if alpha is None:
            raise click.UsageError("single-anchor weights need --alpha")
        ew = weights_for(g, anchor=resolve_anchor(g, base, target), alpha=alpha)
    _write_out(weights_to_csv(g, ew), out)


@main.command(name="filter")
@click.argument("graph", type=click.Path(exists=True, dir_okay=False))
@click.argument("signal", type=click.Path(exists=True, dir_okay=False))
@_anchor_options
@click.option("--alpha", type=float, default=None, help="Scale (single-anchor mode).")
@click.option("--normalize", type=click.Choice(["none", "row"]), default="none")
@click.option("--layers", type=int, default=1, help="Stacked passes; 0 echoes the input.")
@click.option("--mixing", "mixing_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Mixing-matrix file (d=<k> header, d rows).")
@click.option("--enforce-unit-norm/--rescale-unit-norm", "enforce", default=True,
              help="Reject vs rescale a mixing matrix with spectral norm > 1.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_domain_errors
def filter_cmd(graph, signal, base, target, anchors_path, alpha, normalize, layers,
               mixing_path, enforce, out) -> None:
    """Apply the boundary-weighted filter to a signal CSV."""
    _check_anchor_flags(base, target, anchors_path)
    if layers < 0:
        raise click.UsageError("--layers must be >= 0")
    g = _read_graph(graph)
    sig = signal_from_csv(Path(signal).read_text())
    if anchors_path is not None:
        if alpha is not None:
            raise click.UsageError("--alpha is fixed per anchor by the config in multi mode")
        ew = weights_for(g, mix=MultiAnchorConfig.from_json(Path(anchors_path).read_text()))
    else:
        if alpha is None:
            raise click.UsageError("single-anchor filtering needs --alpha")
        ew = weights_for(g, anchor=resolve_anchor(g, base, target), alpha=alpha)
    policy = "enforce" if enforce else "rescale"
    if mixing_path is not None:
        mixer = mixing_from_text(Path(mixing_path).read_text(), policy=policy)
    else:
        mixer = MixingMatrix.identity(sig.d)
    op = build_operator(g, ew, mixer, normalize=normalize)
    _write_out(signal_to_csv(apply_stacked(op, sig, layers)), out)


@main.command()
@click.argument("graph", type=click.Path(exists=True, dir_okay=False))
@_anchor_options
@click.option("--alpha", type=float, default=None, help="Scale (single-anchor mode).")
@click.option("--normalize", type=click.Choice(["none", "row"]), default="none")
@click.option("--engine", type=click.Choice(["auto", "dense", "power"]), default="auto")
@click.option("--k-max", type=int, default=5, help="Depth of the stacked-norm table.")
@click.option("--fourpoint-delta", "with_delta", is_flag=True, default=False,
              help="Also compute four-point delta (O(n^4)) and the decay bounds.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_domain_errors
def spectrum(graph, base, target, anchors_path, alpha, normalize, engine, k_max,
             with_delta, out) -> None:
    """Spectral report + certificate report as one JSON document."""
    _check_anchor_flags(base, target, anchors_path)
    g = _read_graph(graph)
    if anchors_path is not None:
        if alpha is not None:
            raise click.UsageError("--alpha is fixed per anchor by the config in multi mode")
        mix = MultiAnchorConfig.from_json(Path(anchors_path).read_text())
        ew = weights_for(g, mix=mix)
        cfg = FilterConfig(mix=mix, normalize=normalize)
    else:
        if alpha is None:
            raise click.UsageError("single-anchor spectra need --alpha")
        ew = weights_for(g, anchor=resolve_anchor(g, base, target), alpha=alpha)
        cfg = FilterConfig(alpha=alpha, normalize=normalize)
    op = build_operator(g, ew, normalize=normalize)
    mode = {"auto": "auto", "dense": "dense", "power": "power"}[engine]
    report = compute_spectral_report(op.matrix, mode=mode)
    delta = delta_exact(g).delta if with_delta else None
    certs = evaluate_certificates(
        g, cfg, ew, report, k_max=k_max, delta_fourpoint=delta, mode=mode
    )
    doc = {"spectral": report.as_dict(), "certificates": certs.as_dict()}
    _write_out(json.dumps(doc, indent=2) + "\n", out)


@main.command()
@click.option("--plan", "plan_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Sweep plan JSON.")
@click.option("--default", "use_default", is_flag=True, default=False,
              help="Run the curated default plan.")
@click.option("--seed", type=int, default=None, help="Override the plan seed.")
@click.option("--emit-witnesses", type=click.Choice(["failures", "all"]), default="failures")
@click.option("--out-dir", type=click.Path(file_okay=False), default=None,
              help="Directory for verdicts.csv / verdicts.json / witnesses/.")
@click.option("--replay", "replay_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Replay one witness file instead of sweeping.")
@_domain_errors
def verify(plan_path, use_default, seed, emit_witnesses, out_dir, replay_path) -> None:
    """Run the invariant sweep and write the verdict table."""
    if replay_path is not None:
        row, matches = replay(json.loads(Path(replay_path).read_text()))
        click.echo(json.dumps({"row": row, "matches": matches}, indent=2))
        if not matches:
            sys.exit(1)
        return
    if (plan_path is None) == (not use_default):
        raise click.UsageError("choose exactly one of --plan or --default")
    if use_default:
        plan = default_plan(seed=seed if seed is not None else 0)
    else:
        plan = SweepPlan.from_json(Path(plan_path).read_text())
        if seed is not None:
            plan = SweepPlan.from_dict({**plan.as_dict(), "seed": seed})
    if out_dir is None:
        raise click.UsageError("--out-dir is required for sweep outputs")
    result = run_sweep(plan, emit_witnesses=emit_witnesses)
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "verdicts.csv").write_text(result.to_csv())
    (directory / "verdicts.json").write_text(result.to_json())
    witness_dir = directory / "witnesses"
    witness_dir.mkdir(exist_ok=True)
    for name, doc in result.witnesses:
        (witness_dir / name).write_text(json.dumps(doc, indent=2) + "\n")
    errors = sum(1 for row in result.rows if row["error"] is not None)
    click.echo(
        f"rows={len(result.rows)} errors={errors} "
        f"witnesses={len(result.witnesses)} out={directory}"
    )


@main.command()
@click.option("--family", type=click.Choice(sorted(_FAMILY_CHOICES)), default="random-tree")
@click.option("--sizes", callback=_int_list, default="4097,8193,16385",
              help="Comma-separated vertex counts, strictly increasing.")
@click.option("--d", "channels", callback=_int_list, default="16",
              help="Comma-separated channel counts.")
@click.option("--alpha", type=float, default=1.0)
@click.option("--repeats", type=int, default=5)
@click.option("--mixing", type=click.Choice(["identity", "dense"]), default="identity")
@click.option("--normalize", type=click.Choice(["none", "row"]), default="none")
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_domain_errors
def bench(family, sizes, channels, alpha, repeats, mixing, normalize, seed, out) -> None:
    """Time apply passes; emits the per-size timing CSV."""
    if list(sizes) != sorted(set(sizes)):
        raise click.UsageError("--sizes must be strictly increasing")
    rows = run_bench(
        family=_FAMILY_CHOICES[family],
        sizes=sizes,
        channels=channels,
        alpha=alpha,
        repeats=repeats,
        mixing=mixing,
        normalize=normalize,
        seed=seed,
    )
    _write_out(bench_to_csv(rows), out)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port) -> None:
    """Run the HTTP service wrapping the same operations."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
