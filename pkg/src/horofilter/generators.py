"""Deterministic, seeded graph-family generators.

Random families draw from numpy's PCG64 (np.random.default_rng), so a given
(family, params, seed) triple reproduces the same edge list on any platform.
Every generated graph is connected and simple.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .boundary import Anchor
from .errors import HorofilterError
from .graphs import Graph

FAMILIES = (
    "path",
    "cycle",
    "star",
    "balanced_tree",
    "grid",
    "random_tree",
    "erdos_renyi",
)

_ER_MAX_RETRIES = 200


@dataclass(frozen=True)
class GenSpec:
    """One graph-family request: family name, integer/float params, seed."""

    family: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def graph_id(self) -> str:
        """Stable human-readable id, e.g. 'erdos_renyi_n30_p0.2_s7'."""
        parts = [self.family]
        for key in sorted(self.params):
            parts.append(f"{key[0]}{self.params[key]}")
        if self.seed is not None:
            parts.append(f"s{self.seed}")
        return "_".join(parts)

    def as_dict(self) -> dict:
        doc = {"family": self.family, "params": dict(self.params)}
        if self.seed is not None:
            doc["seed"] = self.seed
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "GenSpec":
        return cls(
            family=doc["family"],
            params=dict(doc.get("params", {})),
            seed=doc.get("seed"),
        )


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise HorofilterError(message)


def _int_param(spec: GenSpec, name: str) -> int:
    _require(name in spec.params, f"{spec.family} generator needs param '{name}'")
    return int(spec.params[name])


def _path_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def _prufer_to_edges(seq: np.ndarray, n: int) -> list[tuple[int, int]]:
    """Decode a Prufer sequence; heap keeps the leaf choice deterministic."""
    degree = np.ones(n, dtype=np.int64)
    for x in seq:
        degree[x] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, int(x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, int(x))
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def generate(spec: GenSpec) -> Graph:
    """Build the requested family; same spec + seed gives an identical graph."""
    family = spec.family
    if family == "path":
        n = _int_param(spec, "n")
        _require(n >= 1, "path needs n >= 1")
        return Graph.from_edges(n, _path_edges(n))

    if family == "cycle":
        n = _int_param(spec, "n")
        _require(n >= 3, "cycle needs n >= 3")
        return Graph.from_edges(n, _path_edges(n) + [(0, n - 1)])

    if family == "star":
        leaves = _int_param(spec, "leaves")
        _require(leaves >= 1, "star needs leaves >= 1")
        return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    if family == "balanced_tree":
        branching = _int_param(spec, "branching")
        depth = _int_param(spec, "depth")
        _require(branching >= 2, "balanced_tree needs branching >= 2")
        _require(depth >= 0, "balanced_tree needs depth >= 0")
        n = (branching ** (depth + 1) - 1) // (branching - 1)
        edges = [((k - 1) // branching, k) for k in range(1, n)]
        return Graph.from_edges(n, edges)

    if family == "grid":
        rows = _int_param(spec, "rows")
        cols = _int_param(spec, "cols")
        _require(rows >= 1 and cols >= 1, "grid needs rows >= 1 and cols >= 1")
        edges = []
        for i in range(rows):
            for j in range(cols):
                v = i * cols + j
                if j + 1 < cols:
                    edges.append((v, v + 1))
                if i + 1 < rows:
                    edges.append((v, v + cols))
        return Graph.from_edges(rows * cols, edges)

    if family == "random_tree":
        n = _int_param(spec, "n")
        _require(n >= 1, "random_tree needs n >= 1")
        if n == 1:
            return Graph.from_edges(1, [])
        if n == 2:
            return Graph.from_edges(2, [(0, 1)])
        rng = np.random.default_rng(spec.seed)
        seq = rng.integers(0, n, size=n - 2)
        return Graph.from_edges(n, _prufer_to_edges(seq, n))

    if family == "erdos_renyi":
        n = _int_param(spec, "n")
        p = float(spec.params.get("p", -1.0))
        _require(n >= 1, "erdos_renyi needs n >= 1")
        _require(0.0 <= p <= 1.0, "erdos_renyi needs p in [0, 1]")
        rng = np.random.default_rng(spec.seed)
        iu, ju = np.triu_indices(n, k=1)
        for _ in range(_ER_MAX_RETRIES):
            mask = rng.random(iu.shape[0]) < p
            edges = np.stack([iu[mask], ju[mask]], axis=1)
            try:
                return Graph.from_edges(n, edges)
            except HorofilterError:
                continue
        raise HorofilterError(
            f"erdos_renyi(n={n}, p={p}) stayed disconnected after "
            f"{_ER_MAX_RETRIES} attempts; raise p"
        )

    raise HorofilterError(f"unknown family {family!r}; choose one of {FAMILIES}")


def ray_aligned_path(n: int) -> tuple[Graph, Anchor]:
    """Path 0-1-...-(n-1) with the anchor pair that puts every edge on the
    base-to-target geodesic, so every edge gap is exactly 1."""
    if n < 2:
        raise HorofilterError("ray_aligned_path needs n >= 2")
    return generate(GenSpec("path", {"n": n})), Anchor(base=0, target=n - 1)


def default_corpus() -> list[GenSpec]:
    """The standard verification corpus.

    Paths n=2..10, cycles n=3..10, stars with 2..8 leaves, balanced trees
    (branching, depth) in {2,3}^2, grids from 2x2 up to 6x6, and 20 seeded
    random trees plus 20 seeded Erdos-Renyi graphs with n <= 60.
    """
    specs: list[GenSpec] = []
    specs.extend(GenSpec("path", {"n": n}) for n in range(2, 11))
    specs.extend(GenSpec("cycle", {"n": n}) for n in range(3, 11))
    specs.extend(GenSpec("star", {"leaves": m}) for m in range(2, 9))
    specs.extend(
        GenSpec("balanced_tree", {"branching": b, "depth": h})
        for b in (2, 3)
        for h in (2, 3)
    )
    specs.extend(
        GenSpec("grid", {"rows": r, "cols": c})
        for r in range(2, 7)
        for c in range(r, 7)
    )
    for s in range(20):
        n = 10 + (50 * s) // 19
        specs.append(GenSpec("random_tree", {"n": n}, seed=s))
    for s in range(20):
        n = 10 + (50 * s) // 19
        p = 0.3 if n <= 20 else 0.2 if n <= 40 else 0.15
        specs.append(GenSpec("erdos_renyi", {"n": n, "p": p}, seed=s))
    return specs
