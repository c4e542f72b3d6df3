"""Partition quality: Newman-Girvan modularity and normalized mutual information."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

__all__ = ["ContingencyTable", "contingency", "modularity", "nmi", "entropy"]


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    counts: np.ndarray
    row_labels: np.ndarray
    col_labels: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def contingency(a, b) -> ContingencyTable:
    """Co-occurrence counts of the labels of ``a`` (rows) and ``b`` (columns).

    Labels may be any sortable values. Catalogs are in sorted label order.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"partitions differ in length: {a.shape} vs {b.shape}")
    if len(a) == 0:
        raise ValueError("partitions are empty")
    ra, ia = np.unique(a, return_inverse=True)
    rb, ib = np.unique(b, return_inverse=True)
    counts = np.zeros((len(ra), len(rb)), dtype=np.int64)
    np.add.at(counts, (ia.ravel(), ib.ravel()), 1)
    return ContingencyTable(counts, ra, rb)


def entropy(counts: np.ndarray) -> float:
    """Shannon entropy (nats) of an array of label counts."""
    # summing in sorted order makes the result independent of label order
    c = np.sort(counts[counts > 0], axis=None)
    p = c / c.sum()
    return float(-(p * np.log(p)).sum())


def nmi(a, b) -> float:
    """Normalized mutual information ``2 I(A;B) / (H(A) + H(B))``.

    Two single-label partitions score 1; a single-label partition against
    anything else scores 0.
    """
    t = contingency(a, b)
    ha = entropy(t.counts.sum(axis=1))
    hb = entropy(t.counts.sum(axis=0))
    if ha == 0.0 and hb == 0.0:
        return 1.0
    if ha == 0.0 or hb == 0.0:
        return 0.0
    mi = ha + hb - entropy(t.counts)
    return min(1.0, max(0.0, 2.0 * mi / (ha + hb)))


def modularity(g: Graph, labels) -> float:
    """Newman-Girvan modularity of a total labeling.

    Uses unweighted adjacency and degrees even on weighted graphs.
    Evaluated per community as ``sum_c L_c/M - (D_c/2M)^2`` where ``L_c`` is
    the number of intra-community edges and ``D_c`` the community's degree
    total.
    """
    labels = np.asarray(labels)
    if labels.shape != (g.node_count,):
        raise ValueError(f"expected {g.node_count} labels, got {labels.shape}")
    m = g.edge_count
    if m == 0:
        raise ValueError("modularity is undefined on a graph with no edges")
    _, comm = np.unique(labels, return_inverse=True)
    comm = comm.ravel()
    k = comm.max() + 1

    src = np.repeat(np.arange(g.node_count), g.degrees())
    same = comm[src] == comm[g.indices]
    # each intra edge is seen from both ends
    inner = np.bincount(comm[src[same]], minlength=k) / 2.0
    deg = np.bincount(comm, weights=g.degrees(), minlength=k)
    return float(np.sum(inner / m) - np.sum((deg / (2.0 * m)) ** 2))
