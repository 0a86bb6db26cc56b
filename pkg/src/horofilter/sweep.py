"""Property sweeps: run every invariant across graphs x alphas x modes.

Each plan cell produces one verdict row. Certified invariants (gap bounds,
norm interpolation, row sums, stacked decay, ...) are expected to hold
everywhere; claim columns (norm2_le_one, radius_le_one) record statements
that constructible instances falsify — a row-normalized star has
norm_2 = sqrt(leaves). Any false column ships a standalone witness JSON with
the full instance so the finding can be replayed independently.

Flags that do not apply to a cell (e.g. row_sum_ok without normalization)
are None, serialized as an empty CSV cell / JSON null.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from ._format import fmt_bool, fmt_float
from .boundary import (
    Anchor,
    MultiAnchorConfig,
    busemann_field,
    edge_gaps,
    suggest_anchor,
)
from .errors import HorofilterError
from .filtering import (
    MixingMatrix,
    Signal,
    apply_filter,
    build_operator,
    edge_weights_multi,
    edge_weights_single,
)
from .generators import GenSpec, generate
from .graphs import Graph, bfs_distances
from .spectral import (
    CERT_TOL,
    DENSE_LIMIT,
    compute_spectral_report,
    norm_2,
)

WITNESS_SCHEMA = "horofilter-witness-v1"

#: Column order of the verdict table (CSV and JSON row dicts).
COLUMNS = (
    "graph",
    "n",
    "edges",
    "max_degree",
    "anchor_base",
    "anchor_target",
    "alpha",
    "normalize",
    "max_edge_gap",
    "min_edge_gap",
    "weight_min",
    "weight_max",
    "norm_1",
    "norm_inf",
    "norm_2",
    "spectral_radius",
    "gap_ok",
    "geodesic_gap_ok",
    "lipschitz_ok",
    "sandwich_ok",
    "multi_sandwich_ok",
    "mono_ok",
    "linearity_ok",
    "separability_ok",
    "row_sum_ok",
    "interp_ok",
    "rho_min_gap_ok",
    "radius_one_ok",
    "sym_radius_ok",
    "engine_agree_ok",
    "stacked_ok",
    "norm2_le_one",
    "radius_le_one",
    "error",
)

_BOOL_COLUMNS = tuple(c for c in COLUMNS if c.endswith("_ok") or c.startswith(("norm2_le", "radius_le")))


@dataclass(frozen=True)
class SweepPlan:
    gen_specs: tuple[GenSpec, ...]
    alphas: tuple[float, ...]
    anchor_strategy: str = "diameter_endpoints"
    normalize_modes: tuple[str, ...] = ("none", "row")
    k_max: int = 3
    signals_per_cell: int = 3
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.gen_specs or not self.alphas or not self.normalize_modes:
            raise HorofilterError("sweep plan needs graphs, alphas and modes")
        if any(a <= 0 for a in self.alphas):
            raise HorofilterError("alpha grid must be strictly positive")
        if self.k_max < 1 or self.signals_per_cell < 1:
            raise HorofilterError("k_max and signals_per_cell must be >= 1")

    def as_dict(self) -> dict:
        return {
            "gen_specs": [s.as_dict() for s in self.gen_specs],
            "alphas": list(self.alphas),
            "anchor_strategy": self.anchor_strategy,
            "normalize_modes": list(self.normalize_modes),
            "k_max": self.k_max,
            "signals_per_cell": self.signals_per_cell,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "SweepPlan":
        try:
            return cls(
                gen_specs=tuple(GenSpec.from_dict(s) for s in doc["gen_specs"]),
                alphas=tuple(float(a) for a in doc["alphas"]),
                anchor_strategy=doc.get("anchor_strategy", "diameter_endpoints"),
                normalize_modes=tuple(doc.get("normalize_modes", ("none", "row"))),
                k_max=int(doc.get("k_max", 3)),
                signals_per_cell=int(doc.get("signals_per_cell", 3)),
                seed=int(doc.get("seed", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise HorofilterError(f"bad sweep plan: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "SweepPlan":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise HorofilterError(f"bad sweep plan JSON: {exc}") from exc
        return cls.from_dict(doc)


@dataclass(frozen=True)
class SweepResult:
    plan: SweepPlan
    rows: tuple[dict, ...]
    witnesses: tuple[tuple[str, dict], ...]  # (filename, document)

    def to_csv(self) -> str:
        lines = [",".join(COLUMNS)]
        for row in self.rows:
            lines.append(",".join(_cell_str(row[c]) for c in COLUMNS))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "plan": self.plan.as_dict(),
            "columns": list(COLUMNS),
            "rows": list(self.rows),
            "witness_files": [name for name, _ in self.witnesses],
        }
        return json.dumps(doc, indent=2) + "\n"


def _cell_str(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return fmt_bool(value)
    if isinstance(value, float):
        return fmt_float(value)
    return str(value)


def default_plan(seed: int = 0) -> SweepPlan:
    """Curated default: ray-aligned paths (the gap-equality fixture),
    hyperbolic trees, the star stress case, cycles, and a grid control."""
    specs = (
        GenSpec("path", {"n": 5}),
        GenSpec("path", {"n": 8}),
        GenSpec("cycle", {"n": 4}),
        GenSpec("cycle", {"n": 5}),
        GenSpec("star", {"leaves": 4}),
        GenSpec("balanced_tree", {"branching": 2, "depth": 3}),
        GenSpec("balanced_tree", {"branching": 3, "depth": 2}),
        GenSpec("grid", {"rows": 4, "cols": 4}),
        GenSpec("grid", {"rows": 3, "cols": 5}),
        GenSpec("random_tree", {"n": 24}, seed=3),
        GenSpec("erdos_renyi", {"n": 24, "p": 0.25}, seed=5),
    )
    return SweepPlan(
        gen_specs=specs,
        alphas=(0.5, math.log(2.0), 2.0),
        seed=seed,
    )


def _pick_anchor(g: Graph, strategy: str) -> Anchor:
    if strategy == "eccentric_from":
        return suggest_anchor(g, "eccentric_from", base=0)
    return suggest_anchor(g, "diameter_endpoints")


def _second_target(g: Graph, anchor: Anchor) -> int | None:
    for v in range(g.n):
        if v not in (anchor.base, anchor.target):
            return v
    return None


def _evaluate_cell(
    g: Graph,
    graph_id: str,
    anchor: Anchor,
    alpha: float,
    normalize: str,
    cell_seed: list[int],
    k_max: int,
    nsignals: int,
) -> dict:
    """One verdict row. Pure in its arguments: replay reproduces it exactly."""
    row: dict = {c: None for c in COLUMNS}
    row.update(
        graph=graph_id,
        n=g.n,
        edges=g.num_edges,
        max_degree=g.max_degree,
        anchor_base=anchor.base,
        anchor_target=anchor.target,
        alpha=float(alpha),
        normalize=normalize,
        error=None,
    )
    try:
        rng = np.random.default_rng(cell_seed)

        fld = busemann_field(g, anchor)
        summary = edge_gaps(g, fld)
        row["max_edge_gap"] = summary.c_max
        row["min_edge_gap"] = summary.c_min
        row["gap_ok"] = bool(summary.c_max <= 1)

        # Edges on a shortest base-target path through both endpoints must
        # have gap exactly 1.
        d_base = bfs_distances(g, anchor.base).dist
        d_tgt = bfs_distances(g, anchor.target).dist
        d_bt = int(d_base[anchor.target])
        eu = g.edge_array[:, 0]
        ev = g.edge_array[:, 1]
        on_geodesic = (d_base[eu] + 1 + d_tgt[ev] == d_bt) | (
            d_base[ev] + 1 + d_tgt[eu] == d_bt
        )
        row["geodesic_gap_ok"] = bool((summary.gaps[on_geodesic] == 1).all())

        # Heights are 1-Lipschitz under hop distance (sampled vertex pairs).
        npairs = min(10, g.n)
        sources = rng.integers(0, g.n, size=npairs)
        others = rng.integers(0, g.n, size=npairs)
        lipschitz = True
        for s, t in zip(sources, others):
            d_row = bfs_distances(g, int(s)).dist
            if abs(int(fld.beta[s]) - int(fld.beta[t])) > int(d_row[t]):
                lipschitz = False
        row["lipschitz_ok"] = lipschitz

        ew = edge_weights_single(g, fld, alpha)
        row["weight_min"] = ew.w_min
        row["weight_max"] = ew.w_max
        lo = math.exp(-alpha * summary.c_max)
        hi = math.exp(-alpha * summary.c_min)
        row["sandwich_ok"] = bool(lo - 1e-12 <= ew.w_min and ew.w_max <= hi + 1e-12)

        halved = np.exp(-(alpha / 2.0) * summary.gaps.astype(np.float64))
        pos = summary.gaps > 0
        row["mono_ok"] = bool(
            (ew.weights[pos] < halved[pos]).all()
            and (ew.weights[~pos] == halved[~pos]).all()
        )

        t2 = _second_target(g, anchor)
        if t2 is None:
            row["multi_sandwich_ok"] = None
        else:
            mix = MultiAnchorConfig(
                base=anchor.base,
                targets=(anchor.target, t2),
                coefficients=(0.6, 0.4),
            )
            fields = [busemann_field(g, a) for a in mix.anchors()]
            mew = edge_weights_multi(g, fields, mix)
            floor = math.exp(-mix.bar_alpha)
            row["multi_sandwich_ok"] = bool(
                mew.weights.size == 0
                or (mew.w_min >= floor - 1e-12 and mew.w_max <= 1.0 + 1e-12)
            )

        op = build_operator(g, ew, MixingMatrix.identity(1), normalize=normalize)
        matrix = op.matrix

        if normalize == "row":
            sums = np.asarray(matrix.sum(axis=1)).ravel()
            row["row_sum_ok"] = bool(np.abs(sums - 1.0).max() <= 1e-12)

        report = compute_spectral_report(matrix)
        row["norm_1"] = report.norm_1
        row["norm_inf"] = report.norm_inf
        row["norm_2"] = report.norm_2
        row["spectral_radius"] = report.spectral_radius
        row["interp_ok"] = bool(
            report.norm_2 <= math.sqrt(report.norm_1 * report.norm_inf) + CERT_TOL
        )
        if normalize == "none":
            bound = g.max_degree * math.exp(-alpha * summary.c_min)
            row["rho_min_gap_ok"] = bool(report.norm_2 <= bound + CERT_TOL)
            row["sym_radius_ok"] = bool(
                abs(report.norm_2 - report.spectral_radius) <= CERT_TOL
            )
        else:
            # The unit claims apply to the row-stochastic operator only; an
            # unnormalized operator with alpha < log(max_degree) legitimately
            # expands, so recording them there would just flood witnesses.
            row["radius_one_ok"] = bool(abs(report.spectral_radius - 1.0) <= CERT_TOL)
            row["norm2_le_one"] = bool(report.norm_2 <= 1.0 + CERT_TOL)
            row["radius_le_one"] = bool(report.spectral_radius <= 1.0 + CERT_TOL)

        if g.n <= 200 and g.n <= DENSE_LIMIT:
            power_value, diag = norm_2(matrix, mode="power")
            denom = max(report.norm_2, np.finfo(float).tiny)
            row["engine_agree_ok"] = bool(
                diag.converged and abs(power_value - report.norm_2) / denom <= 1e-7
            )

        stacked_ok = True
        for _ in range(nsignals):
            sig = Signal(rng.standard_normal((g.n, 1)))
            base_norm = float(np.linalg.norm(sig.values))
            out = sig
            for k in range(1, k_max + 1):
                out = apply_filter(op, out)
                limit = (report.norm_2 + CERT_TOL) ** k * base_norm
                if float(np.linalg.norm(out.values)) > limit:
                    stacked_ok = False
        row["stacked_ok"] = stacked_ok

        f1 = Signal(rng.standard_normal((g.n, 1)))
        f2 = Signal(rng.standard_normal((g.n, 1)))
        a = float(rng.uniform(-2.0, 2.0))
        b = float(rng.uniform(-2.0, 2.0))
        combined = apply_filter(op, Signal(a * f1.values + b * f2.values)).values
        split = a * apply_filter(op, f1).values + b * apply_filter(op, f2).values
        scale = 1.0 + float(np.abs(split).max())
        row["linearity_ok"] = bool(np.abs(combined - split).max() <= 1e-10 * scale)

        op2 = build_operator(g, ew, MixingMatrix.identity(2), normalize=normalize)
        sig2 = Signal(rng.standard_normal((g.n, 2)))
        joint = apply_filter(op2, sig2).values
        per_channel = np.column_stack(
            [apply_filter(op, Signal(sig2.values[:, [j]])).values[:, 0] for j in range(2)]
        )
        row["separability_ok"] = bool(np.abs(joint - per_channel).max() <= 1e-12)
    except Exception as exc:  # cell failures never abort the sweep
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _cell_failed(row: dict) -> bool:
    if row["error"] is not None:
        return True
    return any(row[c] is False for c in _BOOL_COLUMNS)


def run_sweep(plan: SweepPlan, emit_witnesses: str = "failures") -> SweepResult:
    """Execute the plan; deterministic for a fixed plan (same bytes out).

    emit_witnesses: "failures" ships a witness JSON for every row with a
    false column or an error; "all" ships one per row.
    """
    if emit_witnesses not in ("failures", "all"):
        raise HorofilterError("emit_witnesses must be 'failures' or 'all'")

    cells = []
    idx = 0
    for spec in plan.gen_specs:
        graph_id = spec.graph_id()
        try:
            g = generate(spec)
            anchor = _pick_anchor(g, plan.anchor_strategy)
            setup_error = None
        except Exception as exc:  # record per-row, keep sweeping
            g, anchor = None, None
            setup_error = f"{type(exc).__name__}: {exc}"
        for alpha in plan.alphas:
            for mode in plan.normalize_modes:
                cells.append((idx, g, graph_id, anchor, float(alpha), mode, setup_error))
                idx += 1

    rows = []
    for i, g, graph_id, anchor, alpha, mode, setup_error in cells:
        if setup_error is not None:
            row = {c: None for c in COLUMNS}
            row.update(graph=graph_id, alpha=alpha, normalize=mode, error=setup_error)
            rows.append(row)
            continue
        rows.append(
            _evaluate_cell(
                g,
                graph_id,
                anchor,
                alpha,
                mode,
                cell_seed=[plan.seed, i],
                k_max=plan.k_max,
                nsignals=plan.signals_per_cell,
            )
        )

    witnesses = []
    for cell, row in zip(cells, rows):
        i, g, graph_id, anchor, alpha, mode, setup_error = cell
        if setup_error is None and (emit_witnesses == "all" or _cell_failed(row)):
            name = f"witness_{i:04d}_{graph_id}_{mode}.json"
            doc = {
                "schema": WITNESS_SCHEMA,
                "graph_id": graph_id,
                "graph": {"n": g.n, "edges": [[int(u), int(v)] for u, v in g.edge_array]},
                "anchor": {"base": anchor.base, "target": anchor.target},
                "alpha": alpha,
                "normalize": mode,
                "cell_seed": [plan.seed, i],
                "k_max": plan.k_max,
                "signals_per_cell": plan.signals_per_cell,
                "row": row,
            }
            witnesses.append((name, doc))

    return SweepResult(plan=plan, rows=tuple(rows), witnesses=tuple(witnesses))


def replay(doc: dict) -> tuple[dict, bool]:
    """Recompute a witness row; returns (row, matches_stored_row).

    A tampered witness (changed alpha, edges, seed, ...) recomputes to a
    different row and is flagged by matches=False.
    """
    if doc.get("schema") != WITNESS_SCHEMA:
        raise HorofilterError(
            f"witness schema mismatch: expected {WITNESS_SCHEMA!r}, got {doc.get('schema')!r}"
        )
    try:
        g = Graph.from_edges(int(doc["graph"]["n"]), doc["graph"]["edges"])
        anchor = Anchor(int(doc["anchor"]["base"]), int(doc["anchor"]["target"]))
        row = _evaluate_cell(
            g,
            str(doc["graph_id"]),
            anchor,
            float(doc["alpha"]),
            str(doc["normalize"]),
            cell_seed=[int(x) for x in doc["cell_seed"]],
            k_max=int(doc["k_max"]),
            nsignals=int(doc["signals_per_cell"]),
        )
        stored = doc["row"]
    except (KeyError, TypeError, ValueError) as exc:
        raise HorofilterError(f"bad witness document: {exc}") from exc
    return row, row == stored
