"""Immutable undirected simple graphs in compressed adjacency form.

Vertices are dense integer ids in [0, n). Edges have unit length; all
distances are hop counts computed by BFS. Graphs are connected unless
explicitly constructed with allow_disconnected=True, in which case distance
rows may contain the UNREACHABLE sentinel and downstream consumers must
reject it.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._parallel import row_blocks, worker_count
from .errors import DisconnectedGraphError, EdgeListError, SizeCapError

#: Sentinel distance for vertices unreachable from the BFS source.
UNREACHABLE = -1

#: Default vertex cap for dense all-pairs work (matrix is n*n int64).
ALL_PAIRS_CAP = 2000


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph with sorted per-vertex neighbor lists.

    edge_array holds one row (u, v) with u < v per edge, lexicographically
    sorted; indptr/indices are the CSR layout of the symmetric adjacency.
    """

    n: int
    edge_array: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    max_degree: int
    connected: bool

    @classmethod
    def from_edges(cls, n: int, edges, allow_disconnected: bool = False) -> "Graph":
        if n < 1:
            raise EdgeListError(f"vertex count must be >= 1, got {n}")
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if arr.size:
            if arr.min() < 0 or arr.max() >= n:
                raise EdgeListError(
                    f"vertex id out of range [0, {n}): found {arr.min()} .. {arr.max()}"
                )
            lo = arr.min(axis=1)
            hi = arr.max(axis=1)
            loops = lo == hi
            if loops.any():
                v = int(lo[loops][0])
                raise EdgeListError(f"self-loop at vertex {v} is not allowed")
            canon = np.unique(np.stack([lo, hi], axis=1), axis=0)
        else:
            canon = np.empty((0, 2), dtype=np.int64)

        rows = np.concatenate([canon[:, 0], canon[:, 1]])
        cols = np.concatenate([canon[:, 1], canon[:, 0]])
        degrees = np.bincount(rows, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=indptr[1:])
        order = np.lexsort((cols, rows))
        indices = np.ascontiguousarray(cols[order])

        g = cls(
            n=n,
            edge_array=canon,
            indptr=indptr,
            indices=indices,
            max_degree=int(degrees.max()) if n else 0,
            connected=True,
        )
        reached = _reached_count(g, 0)
        object.__setattr__(g, "connected", reached == n)
        if not g.connected and not allow_disconnected:
            raise DisconnectedGraphError(
                f"graph is disconnected ({reached} of {n} vertices reachable from 0); "
                "pass allow_disconnected=True only for ingestion debugging"
            )
        return g

    @property
    def num_edges(self) -> int:
        return int(self.edge_array.shape[0])

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edge_array]

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of v (read-only view)."""
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])


@dataclass(frozen=True, eq=False)
class DistanceRow:
    """Hop distances from one source; UNREACHABLE marks other components."""

    source: int
    dist: np.ndarray = field(repr=False)


def _gather_neighbors(g: Graph, frontier: np.ndarray) -> np.ndarray:
    """Concatenated neighbor lists of all frontier vertices (with duplicates)."""
    starts = g.indptr[frontier]
    counts = g.indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
    return g.indices[offsets + np.arange(total)]


def bfs_distances(g: Graph, source: int) -> DistanceRow:
    """Exact hop distances from source in O(|V| + |E|)."""
    if not 0 <= source < g.n:
        raise EdgeListError(f"source {source} out of range [0, {g.n})")
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        nbrs = _gather_neighbors(g, frontier)
        nbrs = nbrs[dist[nbrs] == UNREACHABLE]
        if nbrs.size == 0:
            break
        frontier = np.unique(nbrs)
        dist[frontier] = level
    return DistanceRow(source=source, dist=dist)


def _reached_count(g: Graph, source: int) -> int:
    return int((bfs_distances(g, source).dist != UNREACHABLE).sum())


def all_pairs_distances(g: Graph, cap: int = ALL_PAIRS_CAP) -> np.ndarray:
    """Full hop-distance matrix; row i equals bfs_distances(g, i).dist exactly.

    Memory is Theta(n^2); refuses n > cap. For larger graphs use per-source
    bfs_distances or sampled quadruples downstream.
    """
    if g.n > cap:
        raise SizeCapError(
            f"all-pairs needs n <= {cap} (got n={g.n}); use sampled mode instead"
        )
    out = np.empty((g.n, g.n), dtype=np.int64)

    def fill(block: tuple[int, int]) -> None:
        for s in range(block[0], block[1]):
            out[s] = bfs_distances(g, s).dist

    blocks = row_blocks(g.n, worker_count())
    if len(blocks) <= 1:
        fill((0, g.n))
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            list(pool.map(fill, blocks))
    return out


def load_edge_list(text: str, allow_disconnected: bool = False) -> Graph:
    """Parse the edge-list text format.

    Lines are "u v" with whitespace separation; '#' starts a comment line and
    blank lines are skipped. An optional first data line "n=<k>" pins the
    vertex count (otherwise n = 1 + max id). Duplicate and reversed pairs are
    deduplicated.
    """
    edges: list[tuple[int, int]] = []
    n_header: int | None = None
    saw_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("n=") and not saw_data:
            try:
                n_header = int(line[2:])
            except ValueError:
                raise EdgeListError(f"line {lineno}: bad vertex-count header {line!r}")
            if n_header < 1:
                raise EdgeListError(f"line {lineno}: vertex count must be >= 1")
            saw_data = True
            continue
        saw_data = True
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListError(f"line {lineno}: non-integer token in {line!r}")
        if u < 0 or v < 0:
            raise EdgeListError(f"line {lineno}: negative vertex id in {line!r}")
        if u == v:
            raise EdgeListError(f"line {lineno}: self-loop {u} {v}")
        edges.append((u, v))

    if not edges and n_header is None:
        raise EdgeListError("empty edge list and no 'n=<k>' header")
    max_id = max(max(u, v) for u, v in edges) if edges else -1
    n = n_header if n_header is not None else max_id + 1
    if max_id >= n:
        raise EdgeListError(f"vertex id {max_id} exceeds declared n={n}")
    return Graph.from_edges(n, edges, allow_disconnected=allow_disconnected)


def dump_edge_list(g: Graph) -> str:
    """Serialize to the edge-list format; inverse of load_edge_list.

    The "n=<k>" header is emitted only when the edge lines alone would not
    recover n (isolated top vertex ids, or no edges at all).
    """
    lines = []
    max_id = int(g.edge_array.max()) if g.num_edges else -1
    if max_id + 1 != g.n:
        lines.append(f"n={g.n}")
    lines.extend(f"{u} {v}" for u, v in g.edge_array)
    return "\n".join(lines) + "\n"
