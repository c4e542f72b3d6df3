"""Community detection from shortest-path distances to seed nodes."""

from .graph import (
    INFINITY,
    Graph,
    GraphWarning,
    bfs_distances,
    build_graph,
    connected_components,
    dijkstra_distances,
    euclidean_edge_weights,
    from_arrays,
)
from .partition import (
    UNASSIGNED,
    DistanceVectors,
    SeedSet,
    assign_communities,
    compute_distance_vectors,
    dv_partition,
    select_seeds_by_proximity,
    select_seeds_top_degree,
)
from .metrics import contingency, modularity, nmi
from .baselines import label_propagation, seeded_label_propagation
from .benchgen import BenchmarkConfig, SpatialBenchmark, generate_benchmark
from .datasets import load_builtin

__version__ = "0.1.0"
