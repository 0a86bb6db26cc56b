"""Acceptance suite: every exit criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run with -s to see them on success).
The default corpus is paths n=2..10, cycles n=3..10, stars with 2..8 leaves,
balanced trees (branching, depth) in {2,3}^2, grids 2x2..6x6, and 20 seeded
random trees plus 20 seeded Erdos-Renyi graphs with n <= 60.
"""

import math
import time

import numpy as np
import pytest
from click.testing import CliRunner

from horofilter import (
    Anchor,
    GenSpec,
    MixingMatrix,
    MultiAnchorConfig,
    Signal,
    apply_filter,
    build_operator,
    busemann_field,
    default_corpus,
    edge_gaps,
    generate,
    norm_2,
    ray_aligned_path,
    spectral_radius,
    suggest_anchor,
    weights_for,
)
from horofilter.benchmarks import run_bench
from horofilter.cli import main as cli_main
from horofilter.spectral import block_norm_2, induced_norms

from ._oracles import dense_norm_2, dense_radius, dense_weight_matrix

ALPHA_GRID = (0.25, 0.5, math.log(2.0), 1.0, 2.0, 4.0)
MODES = ("none", "row")


def _report(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {num:02d} {name}: {status}{suffix}")


@pytest.fixture(scope="module")
def corpus():
    return [(spec, generate(spec)) for spec in default_corpus()]


def _anchors_for(g):
    anchors = [suggest_anchor(g, "diameter_endpoints")]
    anchors.append(suggest_anchor(g, "eccentric_from", base=0))
    anchors.append(Anchor(0, g.n - 1))  # explicit strategy
    return anchors


def test_criterion_01_gap_bound_exact(corpus):
    start = time.monotonic()
    violations = []
    for spec, g in corpus:
        for anchor in _anchors_for(g):
            summary = edge_gaps(g, busemann_field(g, anchor))
            if summary.c_max > 1:  # exact integer comparison
                violations.append((spec.graph_id(), anchor, summary.c_max))
    elapsed = time.monotonic() - start
    ok = not violations and elapsed < 10.0
    _report(1, "edge-gap bound exact on full corpus", ok, f"{elapsed:.2f}s")
    assert not violations, violations[:5]
    assert elapsed < 10.0, f"criterion 1 took {elapsed:.2f}s"


def test_criterion_02_norm_interpolation(corpus):
    violations = []
    for spec, g in corpus:
        anchor = suggest_anchor(g, "diameter_endpoints")
        for alpha in ALPHA_GRID:
            ew = weights_for(g, anchor=anchor, alpha=alpha)
            for mode in MODES:
                W = build_operator(g, ew, normalize=mode).matrix
                norm_1, norm_inf = induced_norms(W)
                n2, _ = norm_2(W, mode="dense")
                if n2 > math.sqrt(norm_1 * norm_inf) + 1e-9:
                    violations.append((spec.graph_id(), alpha, mode, n2))
    _report(2, "norm_2 <= sqrt(norm_1 * norm_inf) on every cell", not violations)
    assert not violations, violations[:5]


def test_criterion_03_degree_gap_bound(corpus):
    violations = []
    for spec, g in corpus:
        anchor = suggest_anchor(g, "diameter_endpoints")
        for alpha in ALPHA_GRID:
            ew = weights_for(g, anchor=anchor, alpha=alpha)
            c_min = int(ew.gaps.min())
            W = build_operator(g, ew, normalize="none").matrix
            n2, _ = norm_2(W, mode="dense")
            if n2 > g.max_degree * math.exp(-alpha * c_min) + 1e-9:
                violations.append((spec.graph_id(), alpha, n2))
    # ray-aligned paths realize c_min = 1, where the bound collapses to the
    # plain degree bound max_degree * exp(-alpha), bitwise
    exact = []
    for n in range(2, 11):
        g, anchor = ray_aligned_path(n)
        for alpha in ALPHA_GRID:
            ew = weights_for(g, anchor=anchor, alpha=alpha)
            c_min = int(ew.gaps.min())
            lhs = g.max_degree * math.exp(-alpha * c_min)
            rhs = g.max_degree * math.exp(-alpha)
            if c_min != 1 or lhs != rhs:
                exact.append((n, alpha))
    ok = not violations and not exact
    _report(3, "norm_2 <= max_degree * exp(-alpha * c_min), exact on rays", ok)
    assert not violations, violations[:5]
    assert not exact, exact[:5]


def test_criterion_04_small_instance_values():
    g, anchor = ray_aligned_path(5)
    ew = weights_for(g, anchor=anchor, alpha=math.log(2.0))
    W = build_operator(g, ew).matrix
    n2, _ = norm_2(W, mode="dense")
    oracle = dense_norm_2(dense_weight_matrix(g.n, g.edges, ew.weights))
    half_p5_ok = (
        abs(n2 - math.sqrt(3.0) / 2.0) <= 1e-9 and abs(n2 - oracle) <= 1e-9
    )

    star = generate(GenSpec("star", {"leaves": 4}))
    sew = weights_for(star, anchor=Anchor(0, 1), alpha=1.0)
    SW = build_operator(star, sew, normalize="row").matrix
    s2, _ = norm_2(SW, mode="dense")
    srad, _ = spectral_radius(SW, mode="dense")
    soracle = dense_weight_matrix(star.n, star.edges, sew.weights, "row")
    star_ok = (
        abs(s2 - 2.0) <= 1e-9
        and abs(s2 - dense_norm_2(soracle)) <= 1e-9
        and abs(srad - 1.0) <= 1e-9
        and abs(srad - dense_radius(soracle)) <= 1e-9
    )
    ok = half_p5_ok and star_ok
    _report(4, "half-P5 norm sqrt(3)/2; star(4) row norm 2, radius 1", ok)
    assert half_p5_ok
    assert star_ok


def test_criterion_05_block_factorization(corpus):
    violations = []
    rng = np.random.default_rng(505)
    for spec, g in corpus:
        if g.n > 30:
            continue
        anchor = suggest_anchor(g, "diameter_endpoints")
        ew = weights_for(g, anchor=anchor, alpha=0.9)
        for mode in MODES:
            W = build_operator(g, ew, normalize=mode).matrix
            w2, _ = norm_2(W, mode="dense")
            for d in (1, 2, 4):
                mixer = MixingMatrix.from_array(
                    rng.standard_normal((d, d)), policy="rescale"
                )
                product = block_norm_2(w2, mixer)
                oracle = dense_norm_2(np.kron(W.toarray(), mixer.entries))
                if abs(product - oracle) > 1e-7 * max(oracle, 1e-300):
                    violations.append((spec.graph_id(), mode, d))
    _report(5, "block norm equals norm_2(W) * norm_2(A) vs dense oracle", not violations)
    assert not violations, violations[:5]


def test_criterion_06_stacked_decay(corpus):
    violations = []
    rng = np.random.default_rng(606)
    for spec, g in corpus:
        anchor = suggest_anchor(g, "diameter_endpoints")
        ew = weights_for(g, anchor=anchor, alpha=math.log(2.0))
        mixer = MixingMatrix.from_array(rng.standard_normal((2, 2)), policy="rescale")
        for mode in MODES:
            op = build_operator(g, ew, mixer, normalize=mode)
            w2, _ = norm_2(op.matrix, mode="dense")
            bound_base = w2 * mixer.spectral_norm + 1e-9
            for _ in range(10):
                sig = Signal(rng.standard_normal((g.n, 2)))
                f_norm = float(np.linalg.norm(sig.values))
                out = sig
                for k in range(1, 6):
                    out = apply_filter(op, out)
                    if float(np.linalg.norm(out.values)) > bound_base ** k * f_norm:
                        violations.append((spec.graph_id(), mode, k))
    _report(6, "stacked energies below (norm_2 * norm_A)^k", not violations)
    assert not violations, violations[:5]


def test_criterion_07_multi_anchor_sandwich(corpus):
    violations = []
    rng = np.random.default_rng(707)
    for spec, g in corpus:
        for m in (2, 3):
            if g.n < m + 1:
                continue
            targets = rng.choice(np.arange(1, g.n), size=m, replace=False)
            raw = rng.uniform(0.2, 1.0, size=m)
            coeffs = raw / raw.sum()
            coeffs[-1] = 1.0 - float(coeffs[:-1].sum())  # exact unit sum
            mix = MultiAnchorConfig(
                base=0,
                targets=tuple(int(t) for t in targets),
                coefficients=tuple(float(c) for c in coeffs),
            )
            ew = weights_for(g, mix=mix)
            floor = math.exp(-mix.bar_alpha) - 1e-12
            ceil = 1.0 + 1e-12
            if ew.w_min < floor or ew.w_max > ceil:
                violations.append((spec.graph_id(), m, ew.w_min, ew.w_max))
    _report(7, "multi-anchor weights inside [exp(-max coeff), 1]", not violations)
    assert not violations, violations[:5]


def test_criterion_08_norm_engine_agreement(corpus):
    violations = []
    nonconverged = 0
    for spec, g in corpus:
        if g.n > 200:
            continue
        anchor = suggest_anchor(g, "diameter_endpoints")
        for alpha in ALPHA_GRID:
            ew = weights_for(g, anchor=anchor, alpha=alpha)
            for mode in MODES:
                W = build_operator(g, ew, normalize=mode).matrix
                dense_value, _ = norm_2(W, mode="dense")
                power_value, diag = norm_2(W, mode="power")
                if not diag.converged:
                    nonconverged += 1
                if abs(power_value - dense_value) > 1e-7 * max(dense_value, 1e-300):
                    violations.append((spec.graph_id(), alpha, mode))
    ok = not violations and nonconverged == 0
    _report(8, "power engine agrees with dense within 1e-7", ok,
            f"nonconverged={nonconverged}")
    assert nonconverged == 0
    assert not violations, violations[:5]


def test_criterion_09_linear_complexity_shape(monkeypatch):
    start = time.monotonic()
    sizes = tuple(2 ** k + 1 for k in range(12, 17))  # |E| = 2^12 .. 2^16
    monkeypatch.setenv("HOROFILTER_THREADS", "1")
    rows = run_bench(sizes=sizes, channels=(16, 64), repeats=5, seed=0)
    slopes = {}
    for d in (16, 64):
        sub = [r for r in rows if r.d == d]
        slopes[d] = float(
            np.polyfit(
                np.log([r.edges for r in sub]),
                np.log([r.median_ns for r in sub]),
                1,
            )[0]
        )
    slope_ok = all(0.8 <= s <= 1.2 for s in slopes.values())

    # outputs must be bit-identical when the worker cap changes
    monkeypatch.setenv("HOROFILTER_THREADS", "4")
    rows4 = run_bench(sizes=sizes[:2], channels=(16,), repeats=2, seed=0)
    monkeypatch.setenv("HOROFILTER_THREADS", "1")
    rows1 = run_bench(sizes=sizes[:2], channels=(16,), repeats=2, seed=0)
    thread_ok = [r.output_sha256 for r in rows4] == [r.output_sha256 for r in rows1]

    elapsed = time.monotonic() - start
    ok = slope_ok and thread_ok and elapsed < 120.0
    _report(
        9,
        "apply scales linearly in |E|",
        ok,
        f"slopes={ {d: round(s, 3) for d, s in slopes.items()} } {elapsed:.1f}s",
    )
    assert slope_ok, slopes
    assert thread_ok
    assert elapsed < 120.0, f"criterion 9 took {elapsed:.1f}s"


def test_criterion_10_verify_determinism(tmp_path):
    runner = CliRunner()
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        result = runner.invoke(
            cli_main, ["verify", "--default", "--seed", "0", "--out-dir", str(out)]
        )
        assert result.exit_code == 0, result.output
        outs.append(out)
    csv_same = (outs[0] / "verdicts.csv").read_bytes() == (outs[1] / "verdicts.csv").read_bytes()
    json_same = (outs[0] / "verdicts.json").read_bytes() == (outs[1] / "verdicts.json").read_bytes()
    wa = sorted(p.name for p in (outs[0] / "witnesses").glob("*.json"))
    wb = sorted(p.name for p in (outs[1] / "witnesses").glob("*.json"))
    witnesses_same = wa == wb and all(
        (outs[0] / "witnesses" / n).read_bytes() == (outs[1] / "witnesses" / n).read_bytes()
        for n in wa
    )
    ok = csv_same and json_same and witnesses_same
    _report(10, "verify --default is byte-identical across runs", ok)
    assert ok
