"""Boundary-weighted edge weights and the sparse filter operator.

Each edge (u, v) gets weight exp(-alpha * |beta(u) - beta(v)|) for a single
anchor field, or the convex combination

    sum_m  a_m * exp(-a_m * |beta_m(u) - beta_m(v)|)

for a multi-anchor mixture (each coefficient doubles as its own exponential
scale). The operator W is receiver-major: row v holds the weights of
messages into v, so applying the filter is

    out(v) = sum_{u in N(v)} W[v, u] * (A f(u))

with A a d x d mixing matrix constrained to unit spectral norm. Row
normalization divides each row by its sum, making W row-stochastic.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ._format import fmt_float
from ._parallel import row_blocks, worker_count
from .boundary import BusemannField, MultiAnchorConfig, edge_gaps
from .errors import HorofilterError
from .graphs import Graph

#: Slack on the unit-spectral-norm contract for mixing matrices.
UNIT_NORM_TOL = 1e-9

NORMALIZE_MODES = ("none", "row")


@dataclass(frozen=True, eq=False)
class EdgeWeights:
    """Per-edge weights in (0, 1], aligned with Graph.edge_array rows.

    gaps has shape (E,) in single mode and (M, E) in multi mode.
    """

    mode: str  # "single" | "multi"
    weights: np.ndarray = field(repr=False)
    gaps: np.ndarray = field(repr=False)
    alpha: float | None = None
    mix: MultiAnchorConfig | None = None

    @property
    def w_min(self) -> float:
        return float(self.weights.min()) if self.weights.size else 1.0

    @property
    def w_max(self) -> float:
        return float(self.weights.max()) if self.weights.size else 1.0


@dataclass(frozen=True, eq=False)
class MixingMatrix:
    """d x d feature mixer with its spectral norm cached at construction."""

    entries: np.ndarray = field(repr=False)
    spectral_norm: float = 1.0
    is_identity: bool = False

    @property
    def d(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def identity(cls, d: int) -> "MixingMatrix":
        return cls(entries=np.eye(d), spectral_norm=1.0, is_identity=True)

    @classmethod
    def from_array(cls, entries, policy: str = "enforce") -> "MixingMatrix":
        """Wrap an arbitrary square matrix.

        policy "enforce" rejects matrices with spectral norm above 1 (plus
        slack); "rescale" divides by the norm so the result is exactly
        unit-norm.
        """
        arr = np.array(entries, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise HorofilterError(f"mixing matrix must be square, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise HorofilterError("mixing matrix has non-finite entries")
        norm = float(np.linalg.svd(arr, compute_uv=False)[0]) if arr.size else 0.0
        if policy == "enforce":
            if norm > 1.0 + UNIT_NORM_TOL:
                raise HorofilterError(
                    f"mixing matrix spectral norm {norm!r} exceeds the unit-norm "
                    "contract; pass policy='rescale' to normalize it"
                )
            return cls(entries=arr, spectral_norm=norm)
        if policy == "rescale":
            if norm == 0.0:
                raise HorofilterError("cannot rescale a zero mixing matrix")
            return cls(entries=arr / norm, spectral_norm=1.0)
        raise HorofilterError(f"unknown mixing policy {policy!r}")


@dataclass(frozen=True)
class FilterConfig:
    """Scale configuration: a single positive alpha, or a multi-anchor mix."""

    alpha: float | None = None
    mix: MultiAnchorConfig | None = None
    normalize: str = "none"

    def __post_init__(self) -> None:
        if (self.alpha is None) == (self.mix is None):
            raise HorofilterError("set exactly one of alpha (single) or mix (multi)")
        if self.alpha is not None and not self.alpha > 0:
            raise HorofilterError(f"alpha must be positive, got {self.alpha!r}")
        if self.normalize not in NORMALIZE_MODES:
            raise HorofilterError(
                f"normalize must be one of {NORMALIZE_MODES}, got {self.normalize!r}"
            )

    @property
    def effective_alpha(self) -> float:
        """alpha in single mode, the largest coefficient in multi mode."""
        return self.alpha if self.alpha is not None else self.mix.bar_alpha


@dataclass(frozen=True, eq=False)
class FilterOperator:
    """Sparse receiver-major weight matrix plus the mixing matrix."""

    matrix: sp.csr_matrix = field(repr=False)
    mixing: MixingMatrix
    normalize: str
    n: int


@dataclass(frozen=True, eq=False)
class Signal:
    """n x d node features; entries must be finite."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise HorofilterError(f"signal must be 2-d (n, d), got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise HorofilterError("signal has non-finite entries")
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def d(self) -> int:
        return int(self.values.shape[1])


def edge_weights_single(g: Graph, fld: BusemannField, alpha: float) -> EdgeWeights:
    """w(u, v) = exp(-alpha * |beta(u) - beta(v)|) per edge."""
    if not alpha > 0:
        raise HorofilterError(f"alpha must be positive, got {alpha!r}")
    gaps = edge_gaps(g, fld).gaps
    weights = np.exp(-alpha * gaps.astype(np.float64))
    return EdgeWeights(mode="single", weights=weights, gaps=gaps, alpha=float(alpha))


def edge_weights_multi(
    g: Graph, fields: list[BusemannField], cfg: MultiAnchorConfig
) -> EdgeWeights:
    """Convex combination of per-anchor exponential factors."""
    if len(fields) != cfg.m:
        raise HorofilterError(
            f"got {len(fields)} fields for {cfg.m} configured anchors"
        )
    for fld, anchor in zip(fields, cfg.anchors()):
        if fld.anchor != anchor:
            raise HorofilterError(
                f"field anchor {fld.anchor} does not match config anchor {anchor}"
            )
    gap_rows = np.stack([edge_gaps(g, fld).gaps for fld in fields])
    coeff = np.asarray(cfg.coefficients, dtype=np.float64)[:, None]
    weights = (coeff * np.exp(-coeff * gap_rows.astype(np.float64))).sum(axis=0)
    return EdgeWeights(mode="multi", weights=weights, gaps=gap_rows, mix=cfg)


def build_operator(
    g: Graph,
    ew: EdgeWeights,
    mixing: MixingMatrix | None = None,
    normalize: str = "none",
) -> FilterOperator:
    """Assemble W (sparsity pattern = adjacency) and attach the mixer.

    normalize="row" divides each receiving row by its sum, so rows sum to 1.
    """
    if normalize not in NORMALIZE_MODES:
        raise HorofilterError(
            f"normalize must be one of {NORMALIZE_MODES}, got {normalize!r}"
        )
    if ew.weights.shape[0] != g.num_edges:
        raise HorofilterError(
            f"got {ew.weights.shape[0]} weights for {g.num_edges} edges"
        )
    if mixing is None:
        mixing = MixingMatrix.identity(1)
    u = g.edge_array[:, 0]
    v = g.edge_array[:, 1]
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    data = np.concatenate([ew.weights, ew.weights])
    matrix = sp.coo_matrix((data, (rows, cols)), shape=(g.n, g.n)).tocsr()
    matrix.sort_indices()
    if normalize == "row":
        sums = np.asarray(matrix.sum(axis=1)).ravel()
        if (sums == 0).any():
            raise HorofilterError(
                "row normalization needs every vertex to have a neighbor"
            )
        matrix = sp.diags(1.0 / sums) @ matrix
        matrix.sort_indices()
    return FilterOperator(matrix=matrix, mixing=mixing, normalize=normalize, n=g.n)


def _sparse_dense(matrix: sp.csr_matrix, dense: np.ndarray) -> np.ndarray:
    """matrix @ dense, optionally split into contiguous row blocks.

    Each output row is an independent ordered sum, so the result is
    bit-identical for any worker count.
    """
    workers = worker_count()
    if workers <= 1 or matrix.shape[0] < 2 * workers:
        return matrix @ dense
    blocks = row_blocks(matrix.shape[0], workers)
    out = np.empty((matrix.shape[0], dense.shape[1]), dtype=np.float64)

    def run(block: tuple[int, int]) -> None:
        out[block[0]:block[1]] = matrix[block[0]:block[1]] @ dense

    with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
        list(pool.map(run, blocks))
    return out


def apply_filter(op: FilterOperator, f: Signal) -> Signal:
    """One filter pass: out(v) = sum_{u in N(v)} W[v,u] (A f(u)).

    Neighbor contributions accumulate in sorted id order (CSR storage order),
    so outputs are bit-stable across runs and worker counts. Cost is
    Theta(|E| d + |V| d^2); the d^2 term is skipped for the identity mixer.
    """
    if f.n != op.n:
        raise HorofilterError(f"signal has {f.n} vertices, operator has {op.n}")
    if f.d != op.mixing.d:
        raise HorofilterError(
            f"signal has {f.d} channels, mixing matrix is {op.mixing.d}x{op.mixing.d}"
        )
    mixed = f.values if op.mixing.is_identity else f.values @ op.mixing.entries.T
    return Signal(_sparse_dense(op.matrix, mixed))


def apply_stacked(op: FilterOperator, f: Signal, k: int) -> Signal:
    """k repeated passes; k = 0 returns the input unchanged."""
    if k < 0:
        raise HorofilterError(f"layer count must be >= 0, got {k}")
    out = Signal(f.values.copy()) if k == 0 else f
    for _ in range(k):
        out = apply_filter(op, out)
    return out


def weights_for(
    g: Graph,
    anchor=None,
    alpha: float | None = None,
    mix: MultiAnchorConfig | None = None,
) -> EdgeWeights:
    """Weights straight from anchor flags: single (anchor, alpha) or multi (mix)."""
    from .boundary import busemann_field

    if mix is not None:
        if anchor is not None or alpha is not None:
            raise HorofilterError("give either (anchor, alpha) or a multi-anchor mix")
        fields = [busemann_field(g, a) for a in mix.anchors()]
        return edge_weights_multi(g, fields, mix)
    if anchor is None or alpha is None:
        raise HorofilterError("single-anchor weights need an anchor and an alpha")
    return edge_weights_single(g, busemann_field(g, anchor), alpha)


# ---------------------------------------------------------------------------
# File formats


def weights_to_csv(g: Graph, ew: EdgeWeights) -> str:
    """Single mode: "u,v,gap,weight". Multi mode: "u,v,weight" plus one gap
    column per anchor."""
    lines = []
    if ew.mode == "single":
        lines.append("u,v,gap,weight")
        for i, (u, v) in enumerate(g.edge_array):
            lines.append(f"{u},{v},{int(ew.gaps[i])},{fmt_float(ew.weights[i])}")
    else:
        gap_cols = ",".join(f"gap{m}" for m in range(ew.gaps.shape[0]))
        lines.append(f"u,v,weight,{gap_cols}")
        for i, (u, v) in enumerate(g.edge_array):
            gaps = ",".join(str(int(x)) for x in ew.gaps[:, i])
            lines.append(f"{u},{v},{fmt_float(ew.weights[i])},{gaps}")
    return "\n".join(lines) + "\n"


def signal_to_csv(f: Signal) -> str:
    """Signal CSV: header "vertex,c0,...,c{d-1}", one row per vertex."""
    header = "vertex," + ",".join(f"c{j}" for j in range(f.d))
    lines = [header]
    for v in range(f.n):
        lines.append(f"{v}," + ",".join(fmt_float(x) for x in f.values[v]))
    return "\n".join(lines) + "\n"


def signal_from_csv(text: str) -> Signal:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("vertex,"):
        raise HorofilterError("signal CSV must start with a 'vertex,c0,...' header")
    d = len(lines[0].split(",")) - 1
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != d + 1:
            raise HorofilterError(f"signal CSV line {lineno}: expected {d + 1} columns")
        try:
            rows.append((int(parts[0]), [float(x) for x in parts[1:]]))
        except ValueError as exc:
            raise HorofilterError(f"signal CSV line {lineno}: {exc}") from exc
    rows.sort(key=lambda r: r[0])
    if [r[0] for r in rows] != list(range(len(rows))):
        raise HorofilterError("signal CSV must cover vertices 0..n-1 exactly once")
    return Signal(np.array([r[1] for r in rows], dtype=np.float64))


def mixing_to_text(m: MixingMatrix) -> str:
    """Mixing-matrix file: first line "d=<k>", then d rows of d floats."""
    lines = [f"d={m.d}"]
    lines.extend(" ".join(fmt_float(x) for x in row) for row in m.entries)
    return "\n".join(lines) + "\n"


def mixing_from_text(text: str, policy: str = "enforce") -> MixingMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("d="):
        raise HorofilterError("mixing file must start with a 'd=<k>' line")
    try:
        d = int(lines[0][2:])
    except ValueError as exc:
        raise HorofilterError(f"bad dimension line {lines[0]!r}") from exc
    if len(lines) != d + 1:
        raise HorofilterError(f"expected {d} matrix rows, got {len(lines) - 1}")
    try:
        arr = np.array([[float(x) for x in ln.split()] for ln in lines[1:]])
    except ValueError as exc:
        raise HorofilterError(f"bad matrix entry: {exc}") from exc
    if arr.shape != (d, d):
        raise HorofilterError(f"expected a {d}x{d} matrix, got {arr.shape}")
    return MixingMatrix.from_array(arr, policy=policy)
