"""Pydantic request/response models for the HTTP service.

Graphs travel as edge-list text (same format as the files), signals as
nested float lists, reports as typed models mirroring the core dataclasses.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field


class AnchorCoefficient(BaseModel):
    target: int
    alpha: float


class MultiAnchorModel(BaseModel):
    base: int
    anchors: list[AnchorCoefficient] = Field(min_length=1)


class GenerateRequest(BaseModel):
    family: str
    params: dict[str, float] = Field(default_factory=dict)
    seed: Optional[int] = None


class GenerateResponse(BaseModel):
    edge_list: str
    n: int
    edges: int
    max_degree: int


class AnalyzeRequest(BaseModel):
    edge_list: str
    mode: Literal["exact", "sampled"] = "exact"
    samples: int = 2000
    seed: Optional[int] = None


class HyperbolicityModel(BaseModel):
    delta: float
    delta_definition: str
    mode: str
    witness: Optional[list[int]]
    quadruples_checked: int
    degenerate: bool


class AnalyzeResponse(BaseModel):
    n: int
    edges: int
    max_degree: int
    diameter: int
    diameter_method: str
    hyperbolicity: HyperbolicityModel


class BusemannRequest(BaseModel):
    edge_list: str
    base: Optional[int] = None
    target: Optional[int] = None
    anchors: Optional[MultiAnchorModel] = None


class FieldModel(BaseModel):
    base: int
    target: int
    beta: list[int]


class BusemannResponse(BaseModel):
    fields: list[FieldModel]


class WeightsRequest(BaseModel):
    edge_list: str
    base: Optional[int] = None
    target: Optional[int] = None
    anchors: Optional[MultiAnchorModel] = None
    alpha: Optional[float] = None


class EdgeWeightModel(BaseModel):
    u: int
    v: int
    weight: float
    gap: Optional[int] = None  # single-anchor mode
    gaps: Optional[list[int]] = None  # multi-anchor mode, one per anchor


class WeightsResponse(BaseModel):
    mode: Literal["single", "multi"]
    weight_min: float
    weight_max: float
    edges: list[EdgeWeightModel]


class FilterRequest(BaseModel):
    edge_list: str
    signal: list[list[float]]
    base: Optional[int] = None
    target: Optional[int] = None
    anchors: Optional[MultiAnchorModel] = None
    alpha: Optional[float] = None
    normalize: Literal["none", "row"] = "none"
    layers: int = 1
    mixing: Optional[list[list[float]]] = None
    mixing_policy: Literal["enforce", "rescale"] = "enforce"


class FilterResponse(BaseModel):
    signal: list[list[float]]


class SpectrumRequest(BaseModel):
    edge_list: str
    base: Optional[int] = None
    target: Optional[int] = None
    anchors: Optional[MultiAnchorModel] = None
    alpha: Optional[float] = None
    normalize: Literal["none", "row"] = "none"
    engine: Literal["auto", "dense", "power"] = "auto"
    k_max: int = 5
    fourpoint_delta: bool = False


class StackedEntryModel(BaseModel):
    k: int
    norm_2: float
    norm2_pow_k: float
    decay_bound: Optional[float]


class SpectralModel(BaseModel):
    norm_1: float
    norm_inf: float
    norm_2: float
    spectral_radius: float
    method: str
    iterations: int
    residual: float
    converged: bool


class CertificateModel(BaseModel):
    alpha_effective: float
    max_degree: int
    c_min: float
    rho_unit_gap: float
    rho_min_gap: float
    norm2_le_rho_min_gap: Optional[bool]
    norm2_le_rho_unit_gap: Optional[bool]
    norm2_le_one: Optional[bool]
    radius_le_one: bool
    strict_contraction_regime: bool
    stacked: list[StackedEntryModel]
    delta_fourpoint: Optional[float]


class SpectrumResponse(BaseModel):
    spectral: SpectralModel
    certificates: CertificateModel


class VerifyRequest(BaseModel):
    plan: Optional[dict[str, Any]] = None  # omit to run the default plan
    seed: Optional[int] = None
    emit_witnesses: Literal["failures", "all"] = "failures"


class VerifyResponse(BaseModel):
    columns: list[str]
    rows: list[dict[str, Any]]
    witnesses: dict[str, dict[str, Any]]


class ReplayRequest(BaseModel):
    witness: dict[str, Any]


class ReplayResponse(BaseModel):
    row: dict[str, Any]
    matches: bool


class HealthResponse(BaseModel):
    status: str
    version: str
