"""FastAPI app exposing the core operations as stateless endpoints.

Every endpoint is a pure request -> response computation over the payload;
there is no shared mutable state, so the service scales across workers and
calls are reproducible. Domain errors map to 400, payload validation to 422.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..boundary import MultiAnchorConfig, busemann_field, resolve_anchor
from ..errors import HorofilterError
from ..filtering import (
    FilterConfig,
    MixingMatrix,
    Signal,
    apply_stacked,
    build_operator,
    weights_for,
)
from ..generators import GenSpec, generate
from ..graphs import dump_edge_list, load_edge_list
from ..hyperbolicity import analyze_graph, delta_exact
from ..spectral import compute_spectral_report, evaluate_certificates
from ..sweep import COLUMNS, SweepPlan, default_plan, replay, run_sweep
from . import schemas


def _mix_from_model(model: schemas.MultiAnchorModel) -> MultiAnchorConfig:
    return MultiAnchorConfig(
        base=model.base,
        targets=tuple(a.target for a in model.anchors),
        coefficients=tuple(a.alpha for a in model.anchors),
    )


def _weights_from_request(g, req) -> tuple:
    """(EdgeWeights, FilterConfig-ready kwargs) for weight-bearing requests."""
    if req.anchors is not None:
        mix = _mix_from_model(req.anchors)
        return weights_for(g, mix=mix), mix
    anchor = resolve_anchor(g, req.base, req.target)
    if req.alpha is None:
        raise HorofilterError("single-anchor requests need an alpha")
    return weights_for(g, anchor=anchor, alpha=req.alpha), None


def create_app() -> FastAPI:
    app = FastAPI(
        title="horofilter",
        version=__version__,
        description="Boundary-weighted graph filters with spectral certificates.",
    )

    @app.exception_handler(HorofilterError)
    async def domain_error_handler(_request: Request, exc: HorofilterError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/generate", response_model=schemas.GenerateResponse)
    def generate_graph(req: schemas.GenerateRequest) -> schemas.GenerateResponse:
        g = generate(GenSpec(req.family, dict(req.params), seed=req.seed))
        return schemas.GenerateResponse(
            edge_list=dump_edge_list(g),
            n=g.n,
            edges=g.num_edges,
            max_degree=g.max_degree,
        )

    @app.post("/analyze", response_model=schemas.AnalyzeResponse)
    def analyze(req: schemas.AnalyzeRequest) -> schemas.AnalyzeResponse:
        g = load_edge_list(req.edge_list)
        doc = analyze_graph(
            g, exact=req.mode == "exact", samples=req.samples, seed=req.seed
        )
        return schemas.AnalyzeResponse(**doc)

    @app.post("/busemann", response_model=schemas.BusemannResponse)
    def busemann(req: schemas.BusemannRequest) -> schemas.BusemannResponse:
        g = load_edge_list(req.edge_list)
        if req.anchors is not None:
            anchors = _mix_from_model(req.anchors).anchors()
        else:
            anchors = [resolve_anchor(g, req.base, req.target)]
        fields = [
            schemas.FieldModel(
                base=a.base,
                target=a.target,
                beta=[int(b) for b in busemann_field(g, a).beta],
            )
            for a in anchors
        ]
        return schemas.BusemannResponse(fields=fields)

    @app.post("/weights", response_model=schemas.WeightsResponse)
    def weights(req: schemas.WeightsRequest) -> schemas.WeightsResponse:
        g = load_edge_list(req.edge_list)
        ew, _mix = _weights_from_request(g, req)
        edges = []
        for i, (u, v) in enumerate(g.edge_array):
            if ew.mode == "single":
                edges.append(
                    schemas.EdgeWeightModel(
                        u=int(u), v=int(v), weight=float(ew.weights[i]),
                        gap=int(ew.gaps[i]),
                    )
                )
            else:
                edges.append(
                    schemas.EdgeWeightModel(
                        u=int(u), v=int(v), weight=float(ew.weights[i]),
                        gaps=[int(x) for x in ew.gaps[:, i]],
                    )
                )
        return schemas.WeightsResponse(
            mode=ew.mode, weight_min=ew.w_min, weight_max=ew.w_max, edges=edges
        )

    @app.post("/filter", response_model=schemas.FilterResponse)
    def filter_signal(req: schemas.FilterRequest) -> schemas.FilterResponse:
        if req.layers < 0:
            raise HorofilterError("layers must be >= 0")
        g = load_edge_list(req.edge_list)
        sig = Signal(req.signal)
        ew, _mix = _weights_from_request(g, req)
        if req.mixing is not None:
            mixer = MixingMatrix.from_array(req.mixing, policy=req.mixing_policy)
        else:
            mixer = MixingMatrix.identity(sig.d)
        op = build_operator(g, ew, mixer, normalize=req.normalize)
        out = apply_stacked(op, sig, req.layers)
        return schemas.FilterResponse(signal=[[float(x) for x in row] for row in out.values])

    @app.post("/spectrum", response_model=schemas.SpectrumResponse)
    def spectrum(req: schemas.SpectrumRequest) -> schemas.SpectrumResponse:
        g = load_edge_list(req.edge_list)
        ew, mix = _weights_from_request(g, req)
        cfg = (
            FilterConfig(mix=mix, normalize=req.normalize)
            if mix is not None
            else FilterConfig(alpha=req.alpha, normalize=req.normalize)
        )
        op = build_operator(g, ew, normalize=req.normalize)
        report = compute_spectral_report(op.matrix, mode=req.engine)
        delta = delta_exact(g).delta if req.fourpoint_delta else None
        certs = evaluate_certificates(
            g, cfg, ew, report, k_max=req.k_max, delta_fourpoint=delta, mode=req.engine
        )
        return schemas.SpectrumResponse(
            spectral=schemas.SpectralModel(**report.as_dict()),
            certificates=schemas.CertificateModel(**certs.as_dict()),
        )

    @app.post("/verify", response_model=schemas.VerifyResponse)
    def verify(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
        if req.plan is not None:
            doc = dict(req.plan)
            if req.seed is not None:
                doc["seed"] = req.seed
            plan = SweepPlan.from_dict(doc)
        else:
            plan = default_plan(seed=req.seed if req.seed is not None else 0)
        result = run_sweep(plan, emit_witnesses=req.emit_witnesses)
        return schemas.VerifyResponse(
            columns=list(COLUMNS),
            rows=[dict(row) for row in result.rows],
            witnesses={name: doc for name, doc in result.witnesses},
        )

    @app.post("/verify/replay", response_model=schemas.ReplayResponse)
    def verify_replay(req: schemas.ReplayRequest) -> schemas.ReplayResponse:
        row, matches = replay(req.witness)
        return schemas.ReplayResponse(row=row, matches=matches)

    return app
