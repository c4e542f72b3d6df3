"""Undirected simple graphs and single-source shortest paths.

Graphs are stored in CSR form (``indptr``/``indices``/``weights``) with the
neighbors of each node sorted by index. All arrays are read-only, so a
:class:`Graph` can be shared freely between threads.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

__all__ = [
    "INFINITY",
    "COINCIDENT_WEIGHT",
    "Graph",
    "GraphWarning",
    "build_graph",
    "from_arrays",
    "bfs_distances",
    "dijkstra_distances",
    "connected_components",
    "euclidean_edge_weights",
]

INFINITY = np.inf
COINCIDENT_WEIGHT = 1e-12


class GraphWarning(UserWarning):
    """Issued when build_graph silently repairs its input."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    Attributes
    ----------
    indptr, indices, weights : numpy.ndarray
        CSR adjacency. Both directions of every edge are stored.
    weighted : bool
        Whether the weights carry information (otherwise all 1.0).
    node_ids : tuple or None
        External id of each internal index, when the graph was built from
        non-integer ids.
    coordinates : numpy.ndarray or None
        ``(n, 2)`` array of node positions.
    """

    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    weighted: bool = False
    node_ids: tuple | None = None
    coordinates: np.ndarray | None = None
    _index: dict = field(default=None, repr=False, compare=False)

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def degrees(self) -> np.ndarray:
        """Unweighted degree (neighbor count) of every node."""
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def neighbor_weights(self, i: int) -> np.ndarray:
        return self.weights[self.indptr[i]:self.indptr[i + 1]]

    def adjacency(self) -> list[list[tuple[int, float]]]:
        """Per-node sorted ``(neighbor, weight)`` lists."""
        return [
            list(zip(self.neighbors(i).tolist(), self.neighbor_weights(i).tolist()))
            for i in range(self.node_count)
        ]

    def edges(self) -> list[tuple[int, int, float]]:
        """Each undirected edge once, as ``(u, v, w)`` with ``u < v``."""
        src = np.repeat(np.arange(self.node_count), np.diff(self.indptr))
        keep = src < self.indices
        return list(zip(src[keep].tolist(), self.indices[keep].tolist(),
                        self.weights[keep].tolist()))

    def external_id(self, i: int) -> Hashable:
        return self.node_ids[i] if self.node_ids is not None else i

    def external_ids(self) -> list:
        if self.node_ids is not None:
            return list(self.node_ids)
        return list(range(self.node_count))

    def index_of(self, node_id: Hashable) -> int:
        """Internal index of an external node id."""
        if self.node_ids is None:
            if isinstance(node_id, (int, np.integer)) and 0 <= node_id < self.node_count:
                return int(node_id)
            raise KeyError(f"unknown node id {node_id!r}")
        try:
            return self._index[node_id]
        except KeyError:
            raise KeyError(f"unknown node id {node_id!r}") from None

    def to_sparse(self, unit: bool = False) -> sparse.csr_matrix:
        """Symmetric adjacency matrix; ``unit=True`` replaces weights with 1."""
        data = np.ones(len(self.indices)) if unit else self.weights
        n = self.node_count
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    def with_weights(self, weights: np.ndarray) -> "Graph":
        return Graph(self.indptr, self.indices, _frozen(np.asarray(weights, dtype=float)),
                     True, self.node_ids, self.coordinates, self._index)

    def with_coordinates(self, coords: np.ndarray | None) -> "Graph":
        if coords is not None:
            coords = _frozen(np.asarray(coords, dtype=float).reshape(self.node_count, 2))
        return Graph(self.indptr, self.indices, self.weights, self.weighted,
                     self.node_ids, coords, self._index)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        same_coords = (
            (self.coordinates is None and other.coordinates is None)
            or (self.coordinates is not None and other.coordinates is not None
                and np.array_equal(self.coordinates, other.coordinates))
        )
        return (
            np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.weights, other.weights)
            and self.weighted == other.weighted
            and self.node_ids == other.node_ids
            and same_coords
        )

    __hash__ = None


def from_arrays(
    n: int,
    src: np.ndarray,
    dst: np.ndarray,
    weights: np.ndarray | None = None,
    *,
    node_ids: Sequence | None = None,
    coordinates: np.ndarray | None = None,
) -> Graph:
    """Build a graph from parallel endpoint arrays of internal indices.

    Self-loops are dropped and duplicate edges collapsed (first weight kept),
    each with a :class:`GraphWarning`.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.shape != dst.shape:
        raise ValueError("src and dst must have the same length")
    weighted = weights is not None
    w = np.ones(len(src)) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != src.shape:
        raise ValueError("weights must match the number of edges")
    if len(src) and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
        raise ValueError(f"edge endpoint out of range for {n} nodes")
    bad = ~(w > 0) | ~np.isfinite(w)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise ValueError(
            f"edge ({src[k]}, {dst[k]}) has weight {w[k]!r}; weights must be positive"
        )

    loops = src == dst
    if loops.any():
        warnings.warn(f"dropped {int(loops.sum())} self-loop(s)", GraphWarning, stacklevel=3)
        src, dst, w = src[~loops], dst[~loops], w[~loops]

    lo, hi = np.minimum(src, dst), np.maximum(src, dst)
    key = lo * n + hi
    _, first = np.unique(key, return_index=True)
    if len(first) < len(key):
        warnings.warn(
            f"collapsed {len(key) - len(first)} duplicate edge(s), keeping first weight",
            GraphWarning, stacklevel=3,
        )
    first.sort()
    lo, hi, w = lo[first], hi[first], w[first]

    rows = np.concatenate([lo, hi])
    cols = np.concatenate([hi, lo])
    ww = np.concatenate([w, w])
    order = np.lexsort((cols, rows))
    rows, cols, ww = rows[order], cols[order], ww[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])

    index = None
    if node_ids is not None:
        node_ids = tuple(node_ids)
        if len(node_ids) != n:
            raise ValueError("node_ids must have one entry per node")
        index = {nid: i for i, nid in enumerate(node_ids)}
        if len(index) != n:
            raise ValueError("node_ids must be distinct")
    if coordinates is not None:
        coordinates = _frozen(np.asarray(coordinates, dtype=float).reshape(n, 2))
    return Graph(_frozen(indptr), _frozen(cols), _frozen(ww), weighted,
                 node_ids, coordinates, index)


def build_graph(
    edges: Iterable[Sequence],
    coords: Mapping[Hashable, tuple[float, float]] | None = None,
    *,
    nodes: Iterable[Hashable] | None = None,
) -> Graph:
    """Build a :class:`Graph` from ``(u, v)`` or ``(u, v, weight)`` tuples.

    When every id is a non-negative integer and no ``nodes`` order is given,
    ids are used directly as internal indices (missing ones become isolated
    nodes). Otherwise ids are mapped to dense indices in first-appearance
    order, starting with ``nodes`` if given.

    Raises
    ------
    ValueError
        On a non-positive weight, or a coordinate for an unknown node.
    """
    edges = [tuple(e) for e in edges]
    for e in edges:
        if len(e) not in (2, 3):
            raise ValueError(f"edge {e!r} must be (u, v) or (u, v, weight)")
    nodes = list(nodes) if nodes is not None else []
    endpoints = [x for e in edges for x in e[:2]]
    integral = not nodes and all(
        isinstance(x, (int, np.integer)) and not isinstance(x, bool) and x >= 0
        for x in endpoints
    )
    if integral:
        n = max(endpoints) + 1 if endpoints else 0
        if coords:
            if not all(isinstance(x, (int, np.integer)) for x in coords):
                raise ValueError("coordinate ids must be node indices")
            n = max(n, max(coords) + 1)
        index = None
        node_ids = None
        src = [e[0] for e in edges]
        dst = [e[1] for e in edges]
    else:
        index: dict = {}
        for x in nodes + endpoints:
            index.setdefault(x, len(index))
        n = len(index)
        node_ids = tuple(index)
        src = [index[e[0]] for e in edges]
        dst = [index[e[1]] for e in edges]

    weighted = any(len(e) == 3 for e in edges)
    weights = None
    if weighted:
        weights = [float(e[2]) if len(e) == 3 else 1.0 for e in edges]

    coordinates = None
    if coords is not None:
        coordinates = np.full((n, 2), np.nan)
        for key, xy in coords.items():
            i = key if index is None else index.get(key)
            if i is None or not 0 <= i < n:
                raise ValueError(f"coordinates given for unknown node {key!r}")
            coordinates[i] = xy
        if np.isnan(coordinates).any():
            missing = int(np.flatnonzero(np.isnan(coordinates).any(axis=1))[0])
            raise ValueError(
                f"no coordinates for node {node_ids[missing] if node_ids else missing!r}"
            )
    return from_arrays(n, np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64),
                       None if weights is None else np.array(weights),
                       node_ids=node_ids, coordinates=coordinates)


def _check_source(g: Graph, source) -> int:
    s = int(source)
    if s != source or not 0 <= s < g.node_count:
        raise IndexError(f"source {source!r} out of range for {g.node_count} nodes")
    return s


def _as_distances(d: np.ndarray) -> np.ndarray:
    # scipy already reports unreachable nodes as inf
    return np.asarray(d, dtype=float).ravel()


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Hop-count distances from ``source``; unreachable nodes get ``inf``."""
    s = _check_source(g, source)
    return _as_distances(csgraph.shortest_path(
        g.to_sparse(unit=True), method="D", directed=False, unweighted=True, indices=s))


def dijkstra_distances(g: Graph, source: int) -> np.ndarray:
    """Weighted shortest-path distances from ``source``; unreachable is ``inf``."""
    s = _check_source(g, source)
    return _as_distances(csgraph.dijkstra(g.to_sparse(), directed=False, indices=s))


def connected_components(g: Graph) -> np.ndarray:
    """Component id per node, numbered by smallest contained node index."""
    _, raw = csgraph.connected_components(g.to_sparse(unit=True), directed=False)
    # relabel by order of first appearance
    _, first, inverse = np.unique(raw, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inverse]


def euclidean_edge_weights(g: Graph) -> Graph:
    """Copy of ``g`` whose edge weights are the Euclidean endpoint distances.

    Coincident endpoints get :data:`COINCIDENT_WEIGHT` so weights stay positive.
    """
    if g.coordinates is None:
        raise ValueError("graph has no node coordinates")
    src = np.repeat(np.arange(g.node_count), g.degrees())
    delta = g.coordinates[src] - g.coordinates[g.indices]
    w = np.hypot(delta[:, 0], delta[:, 1])
    w[w <= 0] = COINCIDENT_WEIGHT
    return g.with_weights(w)
