"""Spatial community benchmark.

Community centers are scattered over a rectangle (a homogeneous Poisson
process or a fixed count of uniform points), nodes are drawn from an
isotropic Gaussian mixture around the centers, pairs are joined with
probability ``exp(-beta * distance)``, and the reference partition assigns
each node to its nearest center (its Voronoi cell).

Randomness comes from one seed per configuration. Each stage draws from its
own stream derived with :class:`numpy.random.SeedSequence`, so changing the
number of draws in one stage leaves the others untouched.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, connected_components, from_arrays

__all__ = [
    "BenchmarkConfig",
    "SpatialBenchmark",
    "stage_rng",
    "sample_seed_points",
    "sample_gaussian_mixture",
    "waxman_connect",
    "voronoi_gold_labels",
    "generate_benchmark",
]

log = logging.getLogger(__name__)

# stream ids are part of the reproducibility contract; never renumber
STREAMS = {"seeds": 0, "mixture": 1, "waxman": 2}


@dataclass(frozen=True)
class BenchmarkConfig:
    """Generation parameters.

    ``seed_mode`` is ``("poisson", intensity)`` or ``("fixed", count)``;
    ``region`` is ``(xmin, ymin, xmax, ymax)``.
    """

    sigma: float
    n_points: int
    beta: float
    rng_seed: int
    seed_mode: tuple = ("fixed", 2)
    region: tuple[float, float, float, float] = (0.0, 0.0, 1.0, 1.0)
    restrict_to_largest_component: bool = True

    def __post_init__(self):
        object.__setattr__(self, "region", tuple(float(v) for v in self.region))
        object.__setattr__(self, "seed_mode", (str(self.seed_mode[0]), self.seed_mode[1]))
        x0, y0, x1, y1 = self.region
        if not (x1 > x0 and y1 > y0):
            raise ValueError(f"region {self.region} must have positive area")
        kind, value = self.seed_mode
        if kind == "poisson":
            if not (isinstance(value, (int, float)) and value > 0 and math.isfinite(value)):
                raise ValueError(f"poisson intensity must be positive, got {value!r}")
        elif kind == "fixed":
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise ValueError(f"fixed seed count must be a positive integer, got {value!r}")
        else:
            raise ValueError(f"seed_mode must be 'poisson' or 'fixed', got {kind!r}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if isinstance(self.n_points, bool) or not isinstance(self.n_points, (int, np.integer)) \
                or self.n_points < 1:
            raise ValueError(f"n_points must be a positive integer, got {self.n_points!r}")
        if not (self.beta >= 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be non-negative, got {self.beta!r}")
        if isinstance(self.rng_seed, bool) or not isinstance(self.rng_seed, (int, np.integer)) \
                or not 0 <= self.rng_seed < 2**64:
            raise ValueError(f"rng_seed must be an unsigned 64-bit integer, got {self.rng_seed!r}")
        if not isinstance(self.restrict_to_largest_component, bool):
            raise ValueError("restrict_to_largest_component must be a boolean")

    @property
    def area(self) -> float:
        x0, y0, x1, y1 = self.region
        return (x1 - x0) * (y1 - y0)

    def to_dict(self) -> dict:
        kind, value = self.seed_mode
        return {
            "region": list(self.region),
            "seed_mode": {kind: value},
            "sigma": self.sigma,
            "n_points": self.n_points,
            "beta": self.beta,
            "rng_seed": self.rng_seed,
            "restrict_to_largest_component": self.restrict_to_largest_component,
        }

    @classmethod
    def from_dict(cls, d: dict, rng_seed: int | None = None) -> "BenchmarkConfig":
        """Build from the JSON object layout; ``rng_seed`` overrides the file."""
        known = {"region", "seed_mode", "sigma", "n_points", "beta", "rng_seed",
                 "restrict_to_largest_component"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key in ("seed_mode", "sigma", "n_points", "beta"):
            if key not in d:
                raise ValueError(f"config is missing {key!r}")
        mode = d["seed_mode"]
        if not isinstance(mode, dict) or len(mode) != 1:
            raise ValueError('seed_mode must be {"poisson": λ} or {"fixed": K}')
        (kind, value), = mode.items()
        seed = rng_seed if rng_seed is not None else d.get("rng_seed")
        if seed is None:
            seed = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
            log.info("no rng_seed given; drew %d from system entropy", seed)
        region = d.get("region", (0.0, 0.0, 1.0, 1.0))
        if isinstance(region, dict):
            region = tuple(region[k] for k in ("xmin", "ymin", "xmax", "ymax"))
        if len(region) != 4:
            raise ValueError("region must be [xmin, ymin, xmax, ymax]")
        for key in ("sigma", "beta"):
            if not isinstance(d[key], (int, float)) or isinstance(d[key], bool):
                raise ValueError(f"{key} must be a number")
        return cls(
            sigma=float(d["sigma"]),
            n_points=d["n_points"],
            beta=float(d["beta"]),
            rng_seed=seed,
            seed_mode=(kind, value),
            region=tuple(region),
            restrict_to_largest_component=d.get("restrict_to_largest_component", True),
        )

    @classmethod
    def from_json(cls, path, rng_seed: int | None = None) -> "BenchmarkConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh), rng_seed)


@dataclass(frozen=True, eq=False)
class SpatialBenchmark:
    graph: Graph
    means: np.ndarray
    gold_labels: np.ndarray
    component_labels: np.ndarray
    config: BenchmarkConfig
    dropped_nodes: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    seed_resamples: int = 0

    @property
    def points(self) -> np.ndarray:
        return self.graph.coordinates


def stage_rng(rng_seed: int, stage: str) -> np.random.Generator:
    """Independent generator for one named pipeline stage."""
    ss = np.random.SeedSequence(int(rng_seed), spawn_key=(STREAMS[stage],))
    return np.random.Generator(np.random.PCG64(ss))


def sample_seed_points(cfg: BenchmarkConfig, rng: np.random.Generator) -> tuple[np.ndarray, int]:
    """Community centers, uniform in the region.

    Returns the ``(k, 2)`` centers and the number of Poisson draws that were
    discarded for yielding fewer than two centers.
    """
    kind, value = cfg.seed_mode
    resamples = 0
    if kind == "fixed":
        k = int(value)
    else:
        mean = value * cfg.area
        if mean < 1e-3:
            raise ValueError(f"poisson intensity {value} gives {mean:g} expected centers")
        k = int(rng.poisson(mean))
        while k < 2:
            resamples += 1
            k = int(rng.poisson(mean))
        if resamples:
            log.info("redrew the Poisson center count %d time(s)", resamples)
    x0, y0, x1, y1 = cfg.region
    pts = np.column_stack([rng.uniform(x0, x1, k), rng.uniform(y0, y1, k)])
    return pts, resamples


def sample_gaussian_mixture(
    means: np.ndarray, sigma: float, n_points: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw points from equal-weight isotropic Gaussians centered at ``means``.

    Returns ``(points, component)`` where ``component[i]`` is the index of
    the Gaussian that produced point ``i``.
    """
    means = np.asarray(means, dtype=float).reshape(-1, 2)
    if len(means) == 0:
        raise ValueError("at least one mean is required")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    comp = rng.integers(len(means), size=n_points)
    pts = means[comp] + sigma * rng.standard_normal((n_points, 2))
    return pts, comp.astype(np.int64)


def waxman_connect(points: np.ndarray, beta: float, rng: np.random.Generator,
                   block: int = 256) -> np.ndarray:
    """Join each pair independently with probability ``exp(-beta * d)``.

    Pairs are visited row by row (``i < j``), one uniform draw each, so the
    result does not depend on ``block``. Returns an ``(m, 2)`` array of
    ``(i, j)`` index pairs.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n < 2:
        raise ValueError("need at least two points")
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta!r}")
    out = []
    for start in range(0, n - 1, block):
        rows = np.arange(start, min(start + block, n - 1))
        # upper-triangle pairs of these rows, in row-major order
        counts = n - 1 - rows
        i = np.repeat(rows, counts)
        j = np.concatenate([np.arange(r + 1, n) for r in rows])
        d = np.hypot(*(pts[i] - pts[j]).T)
        keep = rng.random(len(i)) < np.exp(-beta * d)
        out.append(np.column_stack([i[keep], j[keep]]))
    return np.concatenate(out).astype(np.int64)


def voronoi_gold_labels(points: np.ndarray, means: np.ndarray) -> np.ndarray:
    """Index of the nearest mean for every point; ties go to the lower index."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    means = np.asarray(means, dtype=float).reshape(-1, 2)
    if len(means) == 0:
        raise ValueError("at least one mean is required")
    d2 = ((pts[:, None, :] - means[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1).astype(np.int64)


def generate_benchmark(cfg: BenchmarkConfig) -> SpatialBenchmark:
    """Run the whole pipeline for one realization.

    Raises ValueError when fewer than two centers are produced or when the
    resulting graph has no edges.
    """
    if cfg.n_points < 2:
        raise ValueError("benchmark needs at least 2 points")
    means, resamples = sample_seed_points(cfg, stage_rng(cfg.rng_seed, "seeds"))
    if len(means) < 2:
        raise ValueError(f"benchmark needs at least 2 communities, got {len(means)}")
    points, comp = sample_gaussian_mixture(means, cfg.sigma, cfg.n_points,
                                           stage_rng(cfg.rng_seed, "mixture"))
    edges = waxman_connect(points, cfg.beta, stage_rng(cfg.rng_seed, "waxman"))
    g = from_arrays(cfg.n_points, edges[:, 0], edges[:, 1], coordinates=points)

    dropped = np.empty(0, dtype=np.int64)
    if cfg.restrict_to_largest_component:
        cc = connected_components(g)
        sizes = np.bincount(cc)
        keep = cc == int(np.argmax(sizes))
        if not keep.all():
            dropped = np.flatnonzero(~keep)
            g = _induced(g, np.flatnonzero(keep))
            points, comp = points[keep], comp[keep]
            log.info("kept largest component: %d of %d nodes", keep.sum(), cfg.n_points)
    if g.edge_count == 0:
        raise ValueError("generated graph has no edges; lower beta")

    gold = voronoi_gold_labels(points, means)
    return SpatialBenchmark(g, means, gold, comp, cfg, dropped, resamples)


def _induced(g: Graph, nodes: np.ndarray) -> Graph:
    remap = np.full(g.node_count, -1, dtype=np.int64)
    remap[nodes] = np.arange(len(nodes))
    src = np.repeat(np.arange(g.node_count), g.degrees())
    keep = (src < g.indices) & (remap[src] >= 0) & (remap[g.indices] >= 0)
    coords = None if g.coordinates is None else g.coordinates[nodes]
    return from_arrays(len(nodes), remap[src[keep]], remap[g.indices[keep]],
                       g.weights[keep] if g.weighted else None, coordinates=coords)
