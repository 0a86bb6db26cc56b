"""Timing harness for the filter's linear-cost contract.

Times only `apply_filter` — field computation, weighting and operator
assembly happen once per size outside the timed region, matching the
precompute-once cost accounting. One apply is Theta(|E| d) for the identity
mixer plus Theta(|V| d^2) for a dense one, so doubling |E| at fixed d should
roughly double the median time.
"""

from __future__ import annotations

import hashlib
import statistics
import time
from dataclasses import dataclass

import numpy as np

from ._format import fmt_float
from .boundary import busemann_field, suggest_anchor
from .errors import HorofilterError
from .filtering import MixingMatrix, Signal, apply_filter, build_operator, edge_weights_single
from .generators import GenSpec, generate

BENCH_CSV_HEADER = "family,n,edges,d,median_ns,per_edge_per_channel_ns"

MIXING_MODES = ("identity", "dense")


@dataclass(frozen=True)
class BenchRow:
    family: str
    n: int
    edges: int
    d: int
    median_ns: int
    per_edge_per_channel_ns: float
    output_sha256: str  # determinism check; not part of the CSV


def _spec_for(family: str, n: int, seed: int) -> GenSpec:
    if family in ("random_tree", "erdos_renyi"):
        params: dict = {"n": n}
        if family == "erdos_renyi":
            params["p"] = min(0.5, 3.0 * np.log(max(n, 2)) / n)
        return GenSpec(family, params, seed=seed)
    if family == "path":
        return GenSpec(family, {"n": n})
    if family == "cycle":
        return GenSpec(family, {"n": n})
    if family == "star":
        return GenSpec(family, {"leaves": max(n - 1, 1)})
    raise HorofilterError(f"bench does not support family {family!r}")


def _dense_unit_mixer(d: int, rng: np.random.Generator) -> MixingMatrix:
    return MixingMatrix.from_array(rng.standard_normal((d, d)), policy="rescale")


def run_bench(
    family: str = "random_tree",
    sizes: tuple[int, ...] = (4097, 8193, 16385),
    channels: tuple[int, ...] = (16,),
    alpha: float = 1.0,
    repeats: int = 5,
    mixing: str = "identity",
    normalize: str = "none",
    seed: int = 0,
) -> list[BenchRow]:
    """Median wall time of one apply per (size, d) cell.

    sizes are vertex counts and must be strictly increasing. The timed
    region is exactly one apply_filter call; repeats give the median.
    """
    if list(sizes) != sorted(set(sizes)):
        raise HorofilterError("sizes must be strictly increasing")
    if repeats < 1:
        raise HorofilterError("repeats must be >= 1")
    if mixing not in MIXING_MODES:
        raise HorofilterError(f"mixing must be one of {MIXING_MODES}")

    rows = []
    for n in sizes:
        g = generate(_spec_for(family, n, seed))
        anchor = suggest_anchor(g, "eccentric_from", base=0)
        fld = busemann_field(g, anchor)
        ew = edge_weights_single(g, fld, alpha)
        for d in channels:
            rng = np.random.default_rng([seed, n, d])
            mixer = (
                MixingMatrix.identity(d)
                if mixing == "identity"
                else _dense_unit_mixer(d, rng)
            )
            op = build_operator(g, ew, mixer, normalize=normalize)
            sig = Signal(rng.standard_normal((g.n, d)))
            out = apply_filter(op, sig)  # warm-up, also the hashed output
            times = []
            for _ in range(repeats):
                t0 = time.perf_counter_ns()
                result = apply_filter(op, sig)
                times.append(time.perf_counter_ns() - t0)
                if not np.array_equal(result.values, out.values):
                    raise HorofilterError("apply produced non-deterministic output")
            median_ns = int(statistics.median(times))
            rows.append(
                BenchRow(
                    family=family,
                    n=g.n,
                    edges=g.num_edges,
                    d=d,
                    median_ns=median_ns,
                    per_edge_per_channel_ns=median_ns / (g.num_edges * d),
                    output_sha256=hashlib.sha256(
                        np.ascontiguousarray(out.values).tobytes()
                    ).hexdigest(),
                )
            )
    return rows


def bench_to_csv(rows: list[BenchRow]) -> str:
    lines = [BENCH_CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.family},{r.n},{r.edges},{r.d},{r.median_ns},"
            f"{fmt_float(r.per_edge_per_channel_ns)}"
        )
    return "\n".join(lines) + "\n"
