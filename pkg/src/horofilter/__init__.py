"""Boundary-weighted graph filtering with spectral contraction certificates.

Core pipeline: build a graph, compute a Busemann height field for an anchor
pair, exponentially reweight edges by their height gap, assemble the sparse
filter operator, and measure/certify its induced norms. A verification sweep
runs every invariant across graph families, and a FastAPI service plus a CLI
expose the same operations.
"""

from .boundary import (
    Anchor,
    BusemannField,
    MultiAnchorConfig,
    busemann_field,
    edge_gaps,
    resolve_anchor,
    suggest_anchor,
)
from .errors import (
    DisconnectedGraphError,
    EdgeListError,
    HorofilterError,
    SizeCapError,
)
from .filtering import (
    EdgeWeights,
    FilterConfig,
    FilterOperator,
    MixingMatrix,
    Signal,
    apply_filter,
    apply_stacked,
    build_operator,
    edge_weights_multi,
    edge_weights_single,
    weights_for,
)
from .generators import GenSpec, default_corpus, generate, ray_aligned_path
from .graphs import (
    UNREACHABLE,
    DistanceRow,
    Graph,
    all_pairs_distances,
    bfs_distances,
    dump_edge_list,
    load_edge_list,
)
from .hyperbolicity import (
    HyperbolicityReport,
    analyze_graph,
    delta_exact,
    delta_sampled,
)
from .spectral import (
    CertificateReport,
    SpectralReport,
    block_norm_2,
    compute_spectral_report,
    evaluate_certificates,
    induced_norms,
    norm_2,
    spectral_radius,
)
from .sweep import SweepPlan, SweepResult, default_plan, replay, run_sweep

__version__ = "0.1.0"

__all__ = [
    "Anchor",
    "BusemannField",
    "CertificateReport",
    "DisconnectedGraphError",
    "DistanceRow",
    "EdgeListError",
    "EdgeWeights",
    "FilterConfig",
    "FilterOperator",
    "GenSpec",
    "Graph",
    "HorofilterError",
    "HyperbolicityReport",
    "MixingMatrix",
    "MultiAnchorConfig",
    "Signal",
    "SizeCapError",
    "SpectralReport",
    "SweepPlan",
    "SweepResult",
    "UNREACHABLE",
    "all_pairs_distances",
    "analyze_graph",
    "apply_filter",
    "apply_stacked",
    "bfs_distances",
    "block_norm_2",
    "build_operator",
    "busemann_field",
    "compute_spectral_report",
    "default_corpus",
    "default_plan",
    "delta_exact",
    "delta_sampled",
    "dump_edge_list",
    "edge_gaps",
    "edge_weights_multi",
    "edge_weights_single",
    "evaluate_certificates",
    "generate",
    "induced_norms",
    "load_edge_list",
    "norm_2",
    "ray_aligned_path",
    "replay",
    "resolve_anchor",
    "run_sweep",
    "spectral_radius",
    "suggest_anchor",
    "weights_for",
]
