"""Deterministic graph generators."""
from __future__ import annotations

import itertools
import random
from typing import Any, Mapping

from flipmc.graph import Graph, GraphError

KINDS = ("path", "cycle", "grid", "clique", "half_graph", "random", "kexpr")


class GeneratorError(GraphError):
    pass


def _size(params: Mapping[str, Any], key: str, low: int = 1) -> int:
    if key not in params:
        raise GeneratorError(f"missing parameter {key!r}")
    value = params[key]
    if isinstance(value, bool) or not isinstance(value, int) or value < low:
        raise GeneratorError(f"{key} must be an integer >= {low}, got {value!r}")
    return value


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GeneratorError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def grid(rows: int, cols: int | None = None) -> Graph:
    """Vertex ``i * cols + j`` sits at row ``i``, column ``j``."""
    cols = rows if cols is None else cols
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                edges.append((v, v + 1))
            if i + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def clique(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def half_graph(n: int) -> Graph:
    """``a_i = i`` and ``b_j = n + j`` with ``a_i ~ b_j`` iff ``i <= j``."""
    return Graph.from_edges(
        2 * n,
        [(i, n + j) for i in range(n) for j in range(i, n)],
        colors={"A": range(n), "B": range(n, 2 * n)},
    )


def random_graph(n: int, p: float, seed: int) -> Graph:
    if not 0.0 <= p <= 1.0:
        raise GeneratorError(f"edge probability must lie in [0,1], got {p}")
    rng = random.Random(seed)
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def from_kexpr(text: str) -> Graph:
    from flipmc.cliquewidth import KExprError, eval_kexpression, parse_kexpr

    try:
        return eval_kexpression(parse_kexpr(text))
    except KExprError as exc:
        raise GeneratorError(str(exc)) from None


def generate(kind: str, params: Mapping[str, Any] | None = None) -> Graph:
    """Build a graph from a kind name and its parameters."""
    params = dict(params or {})
    if kind == "path":
        return path(_size(params, "n"))
    if kind == "cycle":
        return cycle(_size(params, "n", 3))
    if kind == "grid":
        rows = _size(params, "rows") if "rows" in params else _size(params, "n")
        cols = _size(params, "cols") if "cols" in params else rows
        return grid(rows, cols)
    if kind == "clique":
        return clique(_size(params, "n"))
    if kind == "half_graph":
        return half_graph(_size(params, "n"))
    if kind == "random":
        if "seed" not in params or "p" not in params:
            raise GeneratorError("random graphs need both 'p' and 'seed'")
        seed = params["seed"]
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise GeneratorError(f"seed must be an integer, got {seed!r}")
        return random_graph(_size(params, "n"), float(params["p"]), seed)
    if kind == "kexpr":
        if "expr" not in params:
            raise GeneratorError("missing parameter 'expr'")
        return from_kexpr(str(params["expr"]))
    raise GeneratorError(f"unknown generator {kind!r}; choose from {', '.join(KINDS)}")
