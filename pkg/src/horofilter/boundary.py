"""Busemann (horofunction) fields for anchor pairs.

On a finite graph the limit along an infinite ray is replaced by the
horofunction of a designated target vertex z, normalized at a base vertex o:

    beta[v] = d(v, z) - d(o, z)

This keeps the properties downstream code relies on: beta[o] = 0, unit slope
along shortest o-z paths, and |beta[u] - beta[v]| <= 1 across every edge
(triangle inequality with unit edge lengths). Values are exact integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DisconnectedGraphError, HorofilterError
from .graphs import UNREACHABLE, Graph, all_pairs_distances, bfs_distances

ANCHOR_STRATEGIES = ("diameter_endpoints", "eccentric_from", "explicit")


@dataclass(frozen=True)
class Anchor:
    """Base vertex o and finite boundary surrogate z (o != z)."""

    base: int
    target: int

    def __post_init__(self) -> None:
        if self.base == self.target:
            raise HorofilterError(
                f"anchor base and target must differ (both {self.base})"
            )


@dataclass(frozen=True, eq=False)
class BusemannField:
    """Per-vertex integer heights beta for one anchor pair."""

    anchor: Anchor
    beta: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class MultiAnchorConfig:
    """Shared base vertex plus M (target, coefficient) pairs.

    Coefficients are positive and sum to 1 (within 1e-12); each coefficient
    doubles as the exponential scale of its own anchor term.
    """

    base: int
    targets: tuple[int, ...]
    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.targets) != len(self.coefficients) or not self.targets:
            raise HorofilterError("need M >= 1 anchors with one coefficient each")
        if any(t == self.base for t in self.targets):
            raise HorofilterError(
                f"every target must differ from the base vertex {self.base}"
            )
        if any(a <= 0 for a in self.coefficients):
            raise HorofilterError("anchor coefficients must be positive")
        total = sum(self.coefficients)
        if abs(total - 1.0) > 1e-12:
            raise HorofilterError(
                f"anchor coefficients must sum to 1 (got {total!r})"
            )

    @property
    def m(self) -> int:
        return len(self.targets)

    @property
    def bar_alpha(self) -> float:
        """Largest coefficient; controls the worst-case weight bound."""
        return max(self.coefficients)

    def anchors(self) -> list[Anchor]:
        return [Anchor(self.base, t) for t in self.targets]

    def to_json(self) -> str:
        doc = {
            "base": self.base,
            "anchors": [
                {"target": t, "alpha": a}
                for t, a in zip(self.targets, self.coefficients)
            ],
        }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "MultiAnchorConfig":
        try:
            doc = json.loads(text)
            base = int(doc["base"])
            targets = tuple(int(a["target"]) for a in doc["anchors"])
            coefficients = tuple(float(a["alpha"]) for a in doc["anchors"])
        except (KeyError, TypeError, ValueError) as exc:
            raise HorofilterError(f"bad multi-anchor config: {exc}") from exc
        return cls(base=base, targets=targets, coefficients=coefficients)


@dataclass(frozen=True, eq=False)
class EdgeGapSummary:
    """Per-edge |beta(u) - beta(v)|, aligned with Graph.edge_array rows."""

    gaps: np.ndarray = field(repr=False)
    c_min: int = 0
    c_max: int = 0


def busemann_field(g: Graph, anchor: Anchor) -> BusemannField:
    """Height field beta[v] = d(v, target) - d(base, target)."""
    for v in (anchor.base, anchor.target):
        if not 0 <= v < g.n:
            raise HorofilterError(f"anchor vertex {v} out of range [0, {g.n})")
    dz = bfs_distances(g, anchor.target).dist
    if (dz == UNREACHABLE).any():
        missing = int(np.argmax(dz == UNREACHABLE))
        raise DisconnectedGraphError(
            f"target {anchor.target} unreachable from vertex {missing}; "
            "Busemann fields need a connected graph"
        )
    return BusemannField(anchor=anchor, beta=dz - dz[anchor.base])


def edge_gaps(g: Graph, f: BusemannField) -> EdgeGapSummary:
    """Absolute height gap across each edge, with min/max summary."""
    if f.beta.shape[0] != g.n:
        raise HorofilterError(
            f"field has {f.beta.shape[0]} vertices, graph has {g.n}"
        )
    if g.num_edges == 0:
        return EdgeGapSummary(gaps=np.empty(0, dtype=np.int64), c_min=0, c_max=0)
    gaps = np.abs(f.beta[g.edge_array[:, 0]] - f.beta[g.edge_array[:, 1]])
    return EdgeGapSummary(gaps=gaps, c_min=int(gaps.min()), c_max=int(gaps.max()))


def suggest_anchor(
    g: Graph, strategy: str = "diameter_endpoints", base: int | None = None
) -> Anchor:
    """Pick an anchor pair.

    diameter_endpoints: lexicographically smallest (o, z) realizing the
    diameter (needs the all-pairs matrix, so the vertex cap applies).
    eccentric_from: farthest vertex from the given base, smallest id on ties.
    """
    if g.n < 2:
        raise HorofilterError("anchor selection needs at least 2 vertices")
    if strategy == "diameter_endpoints":
        dist = all_pairs_distances(g)
        diameter = int(dist.max())
        pair = np.argwhere(np.triu(dist, k=1) == diameter)[0]
        return Anchor(base=int(pair[0]), target=int(pair[1]))
    if strategy == "eccentric_from":
        if base is None:
            raise HorofilterError("eccentric_from needs a base vertex")
        dist = bfs_distances(g, base).dist
        if (dist == UNREACHABLE).any():
            raise DisconnectedGraphError(
                "eccentric_from needs a connected graph"
            )
        return Anchor(base=base, target=int(np.argmax(dist)))
    if strategy == "explicit":
        raise HorofilterError(
            "strategy 'explicit' means the caller supplies Anchor(base, target)"
        )
    raise HorofilterError(
        f"unknown anchor strategy {strategy!r}; choose one of {ANCHOR_STRATEGIES}"
    )


def resolve_anchor(
    g: Graph, base: int | None = None, target: int | None = None
) -> Anchor:
    """Anchor from partial flags: explicit pair, eccentric from a lone base,
    or diameter endpoints when nothing is given."""
    if base is not None and target is not None:
        return Anchor(base=base, target=target)
    if base is not None:
        return suggest_anchor(g, "eccentric_from", base=base)
    if target is not None:
        raise HorofilterError("a target vertex needs a base vertex")
    return suggest_anchor(g, "diameter_endpoints")


def field_to_csv(f: BusemannField) -> str:
    """Field CSV: header 'vertex,beta', one row per vertex."""
    lines = ["vertex,beta"]
    lines.extend(f"{v},{int(b)}" for v, b in enumerate(f.beta))
    return "\n".join(lines) + "\n"
