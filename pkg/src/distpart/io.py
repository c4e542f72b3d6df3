"""Readers and writers for the on-disk formats.

* Edge list: whitespace-separated ``u v [weight]`` per line, ``#`` comments.
  A line holding a single id declares a node (needed for isolated nodes and
  to pin the node order on round trips).
* Coordinates: CSV ``id,x,y``.
* Labels: CSV ``id,label``; the label token ``unassigned`` marks nodes
  outside every community.
* Seeds: CSV ``id,alpha`` (``alpha`` optional, default 1).
* Target points: CSV ``x,y``.
* Means: CSV ``community,x,y``.

Reals are written with 17 significant digits so files round-trip exactly.
"""

from __future__ import annotations

import csv
import json
import math
import os
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .graph import Graph, build_graph
from .partition import UNASSIGNED, SeedSet

__all__ = [
    "FormatError",
    "UNASSIGNED_TOKEN",
    "fmt",
    "dumps_json",
    "read_edge_list",
    "read_coordinates",
    "read_graph",
    "write_edge_list",
    "write_coordinates",
    "write_graph",
    "read_labels",
    "align_labels",
    "write_labels",
    "read_seeds",
    "read_points",
    "write_means",
]

UNASSIGNED_TOKEN = "unassigned"


class FormatError(ValueError):
    """Malformed input file; the message carries ``path:line``."""

    def __init__(self, path, line: int | None, message: str):
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps_json(obj, indent: int = 0) -> str:
    """JSON text with reals at 17 significant digits; keys keep insertion order."""
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps_json(str(k))}: {dumps_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (Mapping, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps_json(v) for v in obj) + "]"
        items = [pad + dumps_json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _float(path, line, token, what) -> float:
    try:
        v = float(token)
    except ValueError:
        raise FormatError(path, line, f"{what} {token!r} is not a number") from None
    if not math.isfinite(v):
        raise FormatError(path, line, f"{what} {token!r} is not finite")
    return v


def read_edge_list(path) -> tuple[list[tuple], list[str]]:
    """Parse an edge-list file into ``(edges, declared_nodes)``."""
    edges, nodes = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tok = line.split()
            if len(tok) == 1:
                nodes.append(tok[0])
            elif len(tok) == 2:
                edges.append((tok[0], tok[1]))
            elif len(tok) == 3:
                w = _float(path, lineno, tok[2], "weight")
                if w <= 0:
                    raise FormatError(path, lineno, f"weight {tok[2]} must be positive")
                edges.append((tok[0], tok[1], w))
            else:
                raise FormatError(path, lineno, f"expected 'u v [weight]', got {len(tok)} fields")
    return edges, nodes


def _csv_rows(path, required: Iterable[str], optional: Iterable[str] = ()):
    required = list(required)
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = None
        for row in reader:
            if row and not row[0].startswith("#"):
                header = [h.strip() for h in row]
                break
        if header is None:
            raise FormatError(path, None, "empty file")
        missing = [c for c in required if c not in header]
        if missing:
            raise FormatError(path, reader.line_num,
                              f"header must contain {required}, got {header}")
        cols = {c: header.index(c) for c in required + [c for c in optional if c in header]}
        for row in reader:
            if not row or (len(row) == 1 and not row[0].strip()) or row[0].startswith("#"):
                continue
            if len(row) != len(header):
                raise FormatError(path, reader.line_num,
                                  f"expected {len(header)} fields, got {len(row)}")
            yield reader.line_num, {c: row[i].strip() for c, i in cols.items()}


def read_coordinates(path) -> dict[str, tuple[float, float]]:
    coords = {}
    for line, row in _csv_rows(path, ("id", "x", "y")):
        if row["id"] in coords:
            raise FormatError(path, line, f"duplicate id {row['id']!r}")
        coords[row["id"]] = (_float(path, line, row["x"], "x"), _float(path, line, row["y"], "y"))
    return coords


def read_graph(edges_path, coords_path=None) -> Graph:
    """Load a graph (string node ids) and, optionally, its coordinates."""
    edges, nodes = read_edge_list(edges_path)
    coords = read_coordinates(coords_path) if coords_path is not None else None
    if coords is not None:
        known = set(nodes)
        known.update(x for e in edges for x in e[:2])
        for key in coords:
            if key not in known:
                raise FormatError(coords_path, None, f"id {key!r} is not a node of the graph")
    try:
        return build_graph(edges, coords, nodes=nodes)
    except ValueError as exc:
        raise FormatError(coords_path or edges_path, None, str(exc)) from None


def _id(g: Graph, i: int) -> str:
    return str(g.external_id(i))


def write_edge_list(g: Graph, path, header: str | None = None) -> None:
    edges = g.edges()
    order = []
    seen = set()
    for u, v, _ in edges:
        for x in (u, v):
            if x not in seen:
                seen.add(x)
                order.append(x)
    declare = order != list(range(g.node_count))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        if declare:
            for i in range(g.node_count):
                fh.write(_id(g, i) + "\n")
        for u, v, w in edges:
            if g.weighted:
                fh.write(f"{_id(g, u)} {_id(g, v)} {fmt(w)}\n")
            else:
                fh.write(f"{_id(g, u)} {_id(g, v)}\n")


def write_coordinates(g: Graph, path) -> None:
    if g.coordinates is None:
        raise ValueError("graph has no coordinates")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "x", "y"])
        for i, (x, y) in enumerate(g.coordinates.tolist()):
            w.writerow([_id(g, i), fmt(x), fmt(y)])


def write_graph(g: Graph, directory, stem: str = "graph") -> tuple[Path, Path | None]:
    """Write ``<stem>.edges`` and, if present, ``<stem>.coords.csv``."""
    directory = Path(directory)
    edges = directory / f"{stem}.edges"
    write_edge_list(g, edges)
    coords = None
    if g.coordinates is not None:
        coords = directory / f"{stem}.coords.csv"
        write_coordinates(g, coords)
    return edges, coords


def read_labels(path) -> dict[str, str]:
    labels = {}
    for line, row in _csv_rows(path, ("id", "label")):
        if row["id"] in labels:
            raise FormatError(path, line, f"duplicate id {row['id']!r}")
        labels[row["id"]] = row["label"]
    return labels


def align_labels(g: Graph, labels: Mapping[str, str], source="labels") -> np.ndarray:
    """Integer label codes in graph node order.

    Tokens are coded by sorted order; ``unassigned`` becomes ``UNASSIGNED``.
    Raises :class:`FormatError` naming the first id that is missing from
    ``labels`` or unknown to the graph.
    """
    ids = [_id(g, i) for i in range(g.node_count)]
    for nid in ids:
        if nid not in labels:
            raise FormatError(source, None, f"no label for node {nid!r}")
    if len(labels) != len(ids):
        extra = next(k for k in labels if k not in set(ids))
        raise FormatError(source, None, f"label given for unknown node {extra!r}")
    tokens = [labels[nid] for nid in ids]
    catalog = sorted({t for t in tokens if t != UNASSIGNED_TOKEN}, key=_token_key)
    code = {t: k for k, t in enumerate(catalog)}
    code[UNASSIGNED_TOKEN] = UNASSIGNED
    return np.array([code[t] for t in tokens], dtype=np.int64)


def _token_key(t: str):
    # numeric tokens sort numerically
    try:
        return (0, float(t), t)
    except ValueError:
        return (1, 0.0, t)


def write_labels(g: Graph, labels, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "label"])
        for i, lab in enumerate(np.asarray(labels).tolist()):
            w.writerow([_id(g, i), UNASSIGNED_TOKEN if lab == UNASSIGNED else lab])


def read_seeds(path, g: Graph) -> SeedSet:
    seeds, alphas = [], []
    for line, row in _csv_rows(path, ("id",), ("alpha",)):
        try:
            seeds.append(g.index_of(_lookup_id(g, row["id"])))
        except KeyError:
            raise FormatError(path, line, f"seed {row['id']!r} is not a node of the graph") from None
        alphas.append(_float(path, line, row["alpha"], "alpha") if row.get("alpha") else 1.0)
    if not seeds:
        raise FormatError(path, None, "no seeds listed")
    try:
        return SeedSet(tuple(seeds), tuple(alphas))
    except ValueError as exc:
        raise FormatError(path, None, str(exc)) from None


def _lookup_id(g: Graph, token: str):
    if g.node_ids is None:
        try:
            return int(token)
        except ValueError:
            return token
    return token


def read_points(path) -> list[tuple[float, float]]:
    pts = []
    for line, row in _csv_rows(path, ("x", "y")):
        pts.append((_float(path, line, row["x"], "x"), _float(path, line, row["y"], "y")))
    if not pts:
        raise FormatError(path, None, "no points listed")
    return pts


def write_means(means, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["community", "x", "y"])
        for k, (x, y) in enumerate(np.asarray(means, dtype=float).tolist()):
            w.writerow([k, fmt(x), fmt(y)])


def ensure_dir(path) -> Path:
    p = Path(path)
    os.makedirs(p, exist_ok=True)
    return p
