"""Small graphs shared by several test modules."""
from flipmc.graph import Graph


def powerset_graph(N: int = 3) -> Graph:
    """``v_1..v_N`` (ids ``0..N-1``) and ``w_I`` for every ``I``; ``v_i ~ w_I`` iff ``i in I``."""
    edges = []
    for I in range(1 << N):
        w = N + I
        edges += [(i, w) for i in range(N) if I >> i & 1]
    return Graph.from_edges(N + (1 << N), edges)


def two_cliques(a: int, b: int) -> Graph:
    edges = [(u, v) for u in range(a) for v in range(u + 1, a)]
    edges += [(a + u, a + v) for u in range(b) for v in range(u + 1, b)]
    return Graph.from_edges(a + b, edges)
