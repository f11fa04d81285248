"""Finite colored graphs stored as per-vertex bitsets.

Vertices are the integers ``0..n-1``.  A :class:`Graph` also carries unary
color predicates, named constants and boolean flags, so the same type serves
plain graphs and their expansions.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

#: Sentinel used in integer distance matrices for disconnected pairs.
DIST_INF = np.int32(2**30)

INF = math.inf


class GraphError(ValueError):
    pass


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable graph with colors, constants and flags.

    ``origin`` maps vertex ids back to a parent graph (set by induced
    subgraphs and interpretations); it is metadata and does not take part in
    equality.
    """

    n: int
    adj: tuple[int, ...]
    colors: Mapping[str, frozenset[int]] = field(default_factory=dict)
    constants: Mapping[str, int] = field(default_factory=dict)
    flags: Mapping[str, bool] = field(default_factory=dict)
    origin: tuple[int, ...] | None = None
    dropped_constants: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise GraphError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            if row & ~full:
                raise GraphError(f"vertex {v} has a neighbor outside 0..{self.n - 1}")
            for u in _bits(row):
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"edge {v}-{u} is not symmetric")
        for name, members in self.colors.items():
            if any(not 0 <= v < self.n for v in members):
                raise GraphError(f"color {name!r} mentions a vertex outside the graph")
        for name, v in self.constants.items():
            if not 0 <= v < self.n:
                raise GraphError(f"constant {name!r} refers to invalid vertex {v}")
        object.__setattr__(self, "colors", {k: frozenset(v) for k, v in self.colors.items()})
        object.__setattr__(self, "constants", dict(self.constants))
        object.__setattr__(self, "flags", {k: bool(v) for k, v in self.flags.items()})

    # construction

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]] = (),
        colors: Mapping[str, Iterable[int]] | None = None,
        constants: Mapping[str, int] | None = None,
        flags: Mapping[str, bool] | None = None,
    ) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(
            n,
            tuple(adj),
            {k: frozenset(vs) for k, vs in (colors or {}).items()},
            dict(constants or {}),
            dict(flags or {}),
        )

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, **extra) -> "Graph":
        m = np.asarray(matrix, dtype=bool)
        n = m.shape[0]
        if m.shape != (n, n):
            raise GraphError("adjacency matrix must be square")
        if m.diagonal().any():
            raise GraphError("adjacency matrix has a nonzero diagonal")
        if not (m == m.T).all():
            raise GraphError("adjacency matrix is not symmetric")
        adj = tuple(mask_of(np.flatnonzero(row).tolist()) for row in m)
        return cls(n, adj, **extra)

    def replace(self, **changes) -> "Graph":
        data = dict(
            n=self.n,
            adj=self.adj,
            colors=self.colors,
            constants=self.constants,
            flags=self.flags,
            origin=self.origin,
            dropped_constants=self.dropped_constants,
        )
        data.update(changes)
        return Graph(**data)

    def expand(
        self,
        colors: Mapping[str, Iterable[int]] | None = None,
        constants: Mapping[str, int] | None = None,
        flags: Mapping[str, bool] | None = None,
    ) -> "Graph":
        """Return a copy with extra (or overriding) symbols."""
        return self.replace(
            colors={**self.colors, **{k: frozenset(v) for k, v in (colors or {}).items()}},
            constants={**self.constants, **(constants or {})},
            flags={**self.flags, **(flags or {})},
        )

    # equality

    def _key(self):
        return (
            self.n,
            self.adj,
            tuple(sorted((k, tuple(sorted(v))) for k, v in self.colors.items())),
            tuple(sorted(self.constants.items())),
            tuple(sorted(self.flags.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def same_edges(self, other: "Graph") -> bool:
        return self.n == other.n and self.adj == other.adj

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"

    # queries

    @property
    def vertices(self) -> range:
        return range(self.n)

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.n):
            raise GraphError(f"invalid vertex id {v!r} for graph with n={self.n}")

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.adj):
            for v in _bits(row >> (u + 1)):
                yield u, u + 1 + v

    @cached_property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    @cached_property
    def matrix(self) -> np.ndarray:
        """Boolean adjacency matrix (read-only)."""
        m = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges():
            m[u, v] = m[v, u] = True
        m.setflags(write=False)
        return m

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs BFS distances; :data:`DIST_INF` marks disconnected pairs."""
        from flipmc._kernels import all_pairs_bfs

        indptr, indices = self.csr()
        d = all_pairs_bfs(self.n, indptr, indices)
        d.setflags(write=False)
        return d

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(self.n + 1, dtype=np.int32)
        rows = [self.neighbors(v) for v in range(self.n)]
        indptr[1:] = np.cumsum([len(r) for r in rows]) if self.n else []
        indices = np.fromiter((u for r in rows for u in r), dtype=np.int32, count=int(indptr[-1]))
        return indptr, indices

    # serialization

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [[u, v] for u, v in self.edges()],
            "colors": {k: sorted(v) for k, v in sorted(self.colors.items())},
            "constants": dict(sorted(self.constants.items())),
            "flags": dict(sorted(self.flags.items())),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Graph":
        try:
            n = int(data["n"])
            edges = [(int(u), int(v)) for u, v in data.get("edges", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from exc
        return cls.from_edges(
            n,
            edges,
            colors=data.get("colors", {}),
            constants=data.get("constants", {}),
            flags=data.get("flags", {}),
        )


# distances


def bfs_dist(G: Graph, u: int, v: int) -> float | int:
    """Shortest-path length between ``u`` and ``v``; ``math.inf`` if disconnected."""
    G.check_vertex(u)
    G.check_vertex(v)
    if "distances" in G.__dict__:
        d = int(G.distances[u, v])
        return INF if d >= DIST_INF else d
    if u == v:
        return 0
    seen = 1 << u
    frontier = 1 << u
    depth = 0
    while frontier:
        depth += 1
        nxt = 0
        for w in _bits(frontier):
            nxt |= G.adj[w]
        nxt &= ~seen
        if nxt >> v & 1:
            return depth
        seen |= nxt
        frontier = nxt
    return INF


def ball(G: Graph, v: int, r: int) -> frozenset[int]:
    """Vertices at distance at most ``r`` from ``v`` (including ``v``)."""
    G.check_vertex(v)
    if r < 0:
        raise GraphError("radius must be non-negative")
    seen = 1 << v
    frontier = seen
    for _ in range(r):
        nxt = 0
        for w in _bits(frontier):
            nxt |= G.adj[w]
        frontier = nxt & ~seen
        if not frontier:
            break
        seen |= frontier
    return frozenset(_bits(seen))


def bfs_order(G: Graph, source: int) -> list[int]:
    order, seen, queue = [source], {source}, deque([source])
    while queue:
        w = queue.popleft()
        for u in G.neighbors(w):
            if u not in seen:
                seen.add(u)
                order.append(u)
                queue.append(u)
    return order


class Pseudometric:
    """Distance function backed by an integer matrix with :data:`DIST_INF`."""

    def __init__(self, matrix: np.ndarray):
        self.matrix = np.asarray(matrix, dtype=np.int32)

    def __call__(self, u: int, v: int) -> float | int:
        d = int(self.matrix[u, v])
        return INF if d >= DIST_INF else d

    def far(self, r: int) -> np.ndarray:
        return self.matrix > r

    def restrict(self, ids: Sequence[int]) -> "Pseudometric":
        idx = np.asarray(ids, dtype=np.intp)
        return Pseudometric(self.matrix[np.ix_(idx, idx)])

    def __len__(self):
        return self.matrix.shape[0]


# subgraphs and flips


def induced_subgraph(G: Graph, U: Iterable[int]) -> Graph:
    """Subgraph induced on ``U``; vertex ``i`` of the result is the ``i``-th smallest id of ``U``."""
    ids = sorted(set(U))
    for v in ids:
        G.check_vertex(v)
    pos = {v: i for i, v in enumerate(ids)}
    adj = []
    for v in ids:
        row = 0
        for u in _bits(G.adj[v]):
            if u in pos:
                row |= 1 << pos[u]
        adj.append(row)
    colors = {k: frozenset(pos[v] for v in vs if v in pos) for k, vs in G.colors.items()}
    constants = {k: pos[v] for k, v in G.constants.items() if v in pos}
    dropped = tuple(sorted(k for k, v in G.constants.items() if v not in pos))
    origin = tuple(G.origin[v] for v in ids) if G.origin is not None else tuple(ids)
    return Graph(len(ids), tuple(adj), colors, constants, dict(G.flags), origin, dropped)


@dataclass(frozen=True)
class FlipSpec:
    """A labeled partition of the vertices plus a symmetric relation on labels.

    ``labels[v]`` is the cell label of vertex ``v``.  ``rel`` holds ordered
    label pairs and must be closed under swapping.
    """

    labels: tuple[Hashable, ...]
    rel: frozenset[tuple[Hashable, Hashable]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "rel", frozenset(self.rel))
        for a, b in self.rel:
            if (b, a) not in self.rel:
                raise GraphError(f"flip relation is not symmetric: ({a!r},{b!r})")

    @classmethod
    def symmetric(cls, labels, pairs) -> "FlipSpec":
        rel = set()
        for a, b in pairs:
            rel.add((a, b))
            rel.add((b, a))
        return cls(tuple(labels), frozenset(rel))

    def with_rel(self, pairs) -> "FlipSpec":
        return FlipSpec.symmetric(self.labels, pairs)

    def cells(self) -> dict[Hashable, int]:
        out: dict[Hashable, int] = {}
        for v, lab in enumerate(self.labels):
            out[lab] = out.get(lab, 0) | (1 << v)
        return out


def apply_flip(G: Graph, f: FlipSpec) -> Graph:
    """Complement adjacency between cells whose labels are related.

    Pairs ``(v, v)`` are never touched, so the result stays irreflexive.
    """
    if len(f.labels) != G.n:
        raise GraphError(f"flip partition covers {len(f.labels)} vertices, graph has {G.n}")
    cells = f.cells()
    partners: dict[Hashable, int] = {}
    for a, b in f.rel:
        if a in cells and b in cells:
            partners[a] = partners.get(a, 0) | cells[b]
    adj = tuple(
        row ^ (partners.get(f.labels[v], 0) & ~(1 << v)) for v, row in enumerate(G.adj)
    )
    return G.replace(adj=adj)


def traces(G: Graph, S: Sequence[int]) -> tuple[int, ...]:
    """Per-vertex bitmask over positions of ``S``: bit ``i`` set iff ``S[i]`` is a neighbor."""
    out = []
    for v in range(G.n):
        row = G.adj[v]
        t = 0
        for i, s in enumerate(S):
            if row >> s & 1:
                t |= 1 << i
        out.append(t)
    return tuple(out)


def guarded_partition(G: Graph, S: Sequence[int]) -> FlipSpec:
    """Partition of ``V(G)`` by neighborhood trace on ``S`` (empty relation)."""
    for s in S:
        G.check_vertex(s)
    return FlipSpec(traces(G, S))


def complement(G: Graph) -> Graph:
    return apply_flip(G, FlipSpec((0,) * G.n, frozenset({(0, 0)})))
