"""Random graphs and formulas for property tests."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from flipmc.graph import Graph
from flipmc.logic import (
    And, Color, Const, DistLe, Edge, Eq, Exists, Flag, Forall, Implies, Not, Or, Truth, Var, Xor,
)

COLORS = ("red", "blue")
FLAGS = ("on", "off")


def random_graph(rng: random.Random, n_max: int = 7, p: float | None = None,
                 decorated: bool = True) -> Graph:
    n = rng.randint(1, n_max)
    p = rng.random() if p is None else p
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    if not decorated:
        return Graph.from_edges(n, edges)
    colors = {c: [v for v in range(n) if rng.random() < 0.4] for c in COLORS}
    return Graph.from_edges(n, edges, colors=colors, constants={"k": rng.randrange(n)},
                            flags={"on": True, "off": False})


def random_formula(rng: random.Random, depth: int, bound: list[str], free_pool=("x", "y"),
                   dist: bool = True):
    """A formula whose variables come from ``bound`` plus the free pool."""
    names = list(bound) + list(free_pool)

    def term():
        if rng.random() < 0.1:
            return Const("k")
        return Var(rng.choice(names))

    if depth == 0 or rng.random() < 0.25:
        kind = rng.randrange(6)
        if kind == 0:
            return Edge(term(), term())
        if kind == 1:
            return Eq(term(), term())
        if kind == 2:
            return Color(rng.choice(COLORS), term())
        if kind == 3:
            return Flag(rng.choice(FLAGS))
        if kind == 4 and dist:
            return DistLe(rng.randint(0, 3), term(), term())
        return Truth(rng.random() < 0.5)
    kind = rng.randrange(7)
    sub = lambda: random_formula(rng, depth - 1, bound, free_pool, dist)  # noqa: E731
    if kind == 0:
        return Not(sub())
    if kind == 1:
        return And(tuple(sub() for _ in range(rng.randint(2, 3))))
    if kind == 2:
        return Or(tuple(sub() for _ in range(rng.randint(2, 3))))
    if kind == 3:
        return Xor(sub(), sub())
    if kind == 4:
        return Implies(sub(), sub())
    var = rng.choice(["z", "w", "x", "y"])
    body = random_formula(rng, depth - 1, bound + [var], free_pool, dist)
    return (Exists if kind == 5 else Forall)(var, body)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def graphs(draw, n_max: int = 8, decorated: bool = False):
    n = draw(st.integers(1, n_max))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [e for e, keep in zip(pairs, chosen) if keep]
    if not decorated:
        return Graph.from_edges(n, edges)
    red = draw(st.sets(st.integers(0, n - 1)))
    return Graph.from_edges(n, edges, colors={"red": red})
