"""Asynchronous label propagation, plain and with pinned seed labels."""

from __future__ import annotations

import logging
from collections import Counter

import numpy as np

from .graph import Graph
from .partition import UNASSIGNED, SeedSet

__all__ = ["label_propagation", "seeded_label_propagation", "propagate"]

log = logging.getLogger(__name__)


def propagate(
    g: Graph,
    labels: np.ndarray,
    rng: np.random.Generator,
    max_sweeps: int = 100,
    fixed: np.ndarray | None = None,
) -> tuple[np.ndarray, int, bool]:
    """Run label propagation starting from ``labels``.

    Nodes are visited in a fresh random order every sweep. A node takes the
    most frequent label among its labeled neighbors (``UNASSIGNED``
    neighbors do not vote). It keeps its current label if that one is among
    the most frequent; otherwise ties are broken uniformly at random.
    Nodes in ``fixed`` never change.

    Returns
    -------
    labels : numpy.ndarray
    sweeps : int
        Number of sweeps performed.
    converged : bool
        True if the last sweep changed nothing.
    """
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be positive")
    n = g.node_count
    cur = np.asarray(labels, dtype=np.int64).tolist()
    nbrs = [g.neighbors(i).tolist() for i in range(n)]
    frozen = np.zeros(n, dtype=bool) if fixed is None else np.asarray(fixed, dtype=bool)
    movable = np.flatnonzero(~frozen & (g.degrees() > 0))

    for sweep in range(1, max_sweeps + 1):
        changed = False
        for i in rng.permutation(movable).tolist():
            votes = Counter(cur[j] for j in nbrs[i] if cur[j] != UNASSIGNED)
            if not votes:
                continue
            top = max(votes.values())
            best = sorted(lab for lab, c in votes.items() if c == top)
            if cur[i] in best:
                continue
            cur[i] = best[0] if len(best) == 1 else best[int(rng.integers(len(best)))]
            changed = True
        if not changed:
            return np.array(cur, dtype=np.int64), sweep, True
    log.warning("label propagation stopped after %d sweeps without converging", max_sweeps)
    return np.array(cur, dtype=np.int64), max_sweeps, False


def _compact(labels: np.ndarray) -> np.ndarray:
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inverse.ravel()]


def label_propagation(g: Graph, rng: np.random.Generator, max_sweeps: int = 100) -> np.ndarray:
    """Unseeded label propagation from one unique label per node.

    Labels are compacted to ``0..K-1`` in order of their smallest node.
    """
    labels, _, _ = propagate(g, np.arange(g.node_count), rng, max_sweeps)
    return _compact(labels)


def seeded_label_propagation(
    g: Graph, s: SeedSet, rng: np.random.Generator, max_sweeps: int = 100
) -> np.ndarray:
    """Label propagation where seed ``j`` permanently carries label ``j``.

    All other nodes start unlabeled; any still unlabeled at the end are
    ``UNASSIGNED``.
    """
    for c in s.seeds:
        if not 0 <= c < g.node_count:
            raise IndexError(f"seed {c} out of range for {g.node_count} nodes")
    labels = np.full(g.node_count, UNASSIGNED, dtype=np.int64)
    labels[list(s.seeds)] = np.arange(len(s))
    fixed = labels != UNASSIGNED
    out, _, _ = propagate(g, labels, rng, max_sweeps, fixed=fixed)
    return out
