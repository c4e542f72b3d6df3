"""Bundled reference networks."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .graph import Graph, build_graph

__all__ = ["NamedDataset", "load_builtin", "available"]


@dataclass(frozen=True, eq=False)
class NamedDataset:
    name: str
    graph: Graph
    ground_truth: np.ndarray | None
    provenance: str


def _karate() -> NamedDataset:
    data = resources.files(__package__) / "data"
    edges = []
    for line in (data / "karate_edges.txt").read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            u, v = line.split()
            edges.append((int(u), int(v)))
    with (data / "karate_factions.csv").open(encoding="utf-8", newline="") as fh:
        rows = sorted((int(r["id"]), int(r["label"])) for r in csv.DictReader(fh))
    truth = np.array([lab for _, lab in rows], dtype=np.int64)
    truth.setflags(write=False)
    return NamedDataset(
        "karate",
        build_graph(edges),
        truth,
        "Zachary (1977) karate club, 0-indexed. Ground truth is the post-split "
        "club membership: 0 = Mr. Hi (node 0), 1 = Officer (node 33).",
    )


_REGISTRY = {"karate": _karate}


def available() -> list[str]:
    return sorted(_REGISTRY)


def load_builtin(name: str) -> NamedDataset:
    """Load a bundled dataset by name (see :func:`available`)."""
    try:
        loader = _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown dataset {name!r}; available: {available()}") from None
    return loader()
