"""Flip-based first-order model checking on graph interpretations."""
from flipmc._kernels import BACKEND
from flipmc.graph import FlipSpec, Graph, apply_flip, ball, bfs_dist, guarded_partition, induced_subgraph

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "FlipSpec", "Graph", "apply_flip", "ball", "bfs_dist", "guarded_partition",
    "induced_subgraph",
]
