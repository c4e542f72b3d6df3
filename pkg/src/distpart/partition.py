"""Seed-based community assignment from shortest-path distance vectors.

Every node is placed in a coordinate space with one axis per seed, the
coordinate being the (optionally weighted) shortest-path distance to that
seed. A node joins the community of its nearest seed. When several seeds
are equally near, the node goes to the seed for which the summed
coordinates of its neighbors are smallest; any remaining tie goes to the
lowest seed index.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .graph import Graph, bfs_distances, dijkstra_distances

__all__ = [
    "UNASSIGNED",
    "SeedSet",
    "DistanceVectors",
    "compute_distance_vectors",
    "assign_communities",
    "select_seeds_top_degree",
    "select_seeds_by_proximity",
    "dv_partition",
    "singletons_for_unassigned",
]

UNASSIGNED = -1

Metric = Literal["topological", "spatial"]


@dataclass(frozen=True)
class SeedSet:
    """Ordered seed nodes; position ``j`` defines community ``j``."""

    seeds: tuple[int, ...]
    alphas: tuple[float, ...] | None = None

    def __post_init__(self):
        seeds = tuple(int(s) for s in self.seeds)
        if not seeds:
            raise ValueError("at least one seed is required")
        if len(set(seeds)) != len(seeds):
            raise ValueError(f"seeds must be distinct, got {list(seeds)}")
        alphas = (1.0,) * len(seeds) if self.alphas is None else tuple(float(a) for a in self.alphas)
        if len(alphas) != len(seeds):
            raise ValueError("one alpha per seed is required")
        if not all(a > 0 and np.isfinite(a) for a in alphas):
            raise ValueError(f"alphas must be positive, got {list(alphas)}")
        object.__setattr__(self, "seeds", seeds)
        object.__setattr__(self, "alphas", alphas)

    def __len__(self) -> int:
        return len(self.seeds)


@dataclass(frozen=True, eq=False)
class DistanceVectors:
    """Shortest-path distances of every node to every seed.

    ``distances`` holds the raw ``node_count x seed_count`` values and
    ``matrix`` the alpha-scaled coordinates.
    """

    distances: np.ndarray
    metric: Metric
    alphas: np.ndarray | None = None

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=float)
        a = np.ones(d.shape[1] if d.ndim == 2 else 0) if self.alphas is None \
            else np.asarray(self.alphas, dtype=float)
        m = d * a if d.ndim == 2 and a.shape == d.shape[1:] else d
        for arr in (d, a, m):
            arr.setflags(write=False)
        object.__setattr__(self, "distances", d)
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "_matrix", m)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def seed_count(self) -> int:
        return self.distances.shape[1]


def compute_distance_vectors(
    g: Graph, s: SeedSet, metric: Metric = "topological", workers: int | None = None
) -> DistanceVectors:
    """Distance of every node to every seed, scaled per seed by its alpha.

    ``metric="spatial"`` uses the edge weights and requires a weighted graph
    (see :func:`distpart.graph.euclidean_edge_weights`). One single-source
    search runs per seed; ``workers`` > 1 runs them on a thread pool.
    """
    for c in s.seeds:
        if not 0 <= c < g.node_count:
            raise IndexError(f"seed {c} out of range for {g.node_count} nodes")
    if metric == "topological":
        search = bfs_distances
    elif metric == "spatial":
        if not g.weighted:
            raise ValueError("spatial metric needs edge weights; graph is unweighted")
        search = dijkstra_distances
    else:
        raise ValueError(f"unknown metric {metric!r}")

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            columns = list(pool.map(lambda c: search(g, c), s.seeds))
    else:
        columns = [search(g, c) for c in s.seeds]
    return DistanceVectors(np.column_stack(columns), metric, np.asarray(s.alphas))


def assign_communities(g: Graph, dv: DistanceVectors) -> np.ndarray:
    """Label each node with the index of its nearest seed.

    Returns an int array; nodes unreachable from every seed are
    :data:`UNASSIGNED`.
    """
    d = dv.matrix
    if d.ndim != 2 or d.shape[0] != g.node_count or d.shape[1] == 0 \
            or dv.alphas.shape != d.shape[1:]:
        raise ValueError(
            f"distance matrix of shape {d.shape} does not match {g.node_count} nodes"
        )
    best = d.min(axis=1)
    tied = d == best[:, None]
    labels = np.argmax(tied, axis=1).astype(np.int64)

    multi = np.flatnonzero(tied.sum(axis=1) > 1)
    if len(multi):
        # neighbor sums only for the tied rows; inf propagates. Summing raw
        # distances before scaling keeps exact ties exact.
        sums = (g.to_sparse(unit=True)[multi] @ dv.distances) * dv.alphas
        cand = np.where(tied[multi], sums, np.inf)
        low = cand.min(axis=1)
        winners = tied[multi] & (cand == low[:, None])
        labels[multi] = np.argmax(winners, axis=1)

    labels[~np.isfinite(best)] = UNASSIGNED
    return labels


def select_seeds_top_degree(g: Graph, k: int) -> SeedSet:
    """The ``k`` highest-degree nodes, listed by node index.

    Equal degrees favor lower indices.
    """
    if not 1 <= k <= g.node_count:
        raise ValueError(f"k={k} out of range for {g.node_count} nodes")
    order = np.lexsort((np.arange(g.node_count), -g.degrees()))
    return SeedSet(tuple(sorted(order[:k].tolist())))


def select_seeds_by_proximity(
    g: Graph, targets: Sequence[tuple[float, float]], alphas: Sequence[float] | None = None
) -> SeedSet:
    """For each target point, the node closest to it in the plane."""
    if g.coordinates is None:
        raise ValueError("graph has no node coordinates")
    targets = np.asarray(targets, dtype=float).reshape(-1, 2)
    if len(targets) == 0:
        raise ValueError("no target points given")
    picks = []
    for t in targets:
        dist = np.hypot(*(g.coordinates - t).T)
        i = int(np.argmin(dist))
        if i in picks:
            raise ValueError(
                f"targets {targets[picks.index(i)].tolist()} and {t.tolist()} "
                f"both resolve to node {g.external_id(i)!r}"
            )
        picks.append(i)
    return SeedSet(tuple(picks), None if alphas is None else tuple(alphas))


def dv_partition(g: Graph, s: SeedSet, metric: Metric = "topological") -> np.ndarray:
    """Shortcut for distance vectors followed by assignment."""
    return assign_communities(g, compute_distance_vectors(g, s, metric))


def singletons_for_unassigned(labels: np.ndarray) -> np.ndarray:
    """Give every UNASSIGNED node its own fresh community id."""
    labels = np.asarray(labels, dtype=np.int64).copy()
    lost = labels == UNASSIGNED
    if lost.any():
        start = labels.max(initial=-1) + 1
        labels[lost] = np.arange(start, start + lost.sum())
    return labels
