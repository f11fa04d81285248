"""Simple one-dimensional interpretations ``I_{phi,delta}``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from flipmc.graph import Graph, GraphError, mask_of
from flipmc.logic import TRUE, Formula, free_vars, pair_matrix, parse, to_text, unary_vector


class InterpretationError(GraphError):
    pass


@dataclass(frozen=True)
class Interpretation:
    phi: Formula
    delta: Formula = TRUE
    name: str = "custom"

    def __post_init__(self):
        if not free_vars(self.phi) <= {"x", "y"}:
            raise InterpretationError(f"phi may only use free variables x,y: {to_text(self.phi)}")
        if not free_vars(self.delta) <= {"x"}:
            raise InterpretationError(f"delta may only use free variable x: {to_text(self.delta)}")

    @classmethod
    def from_text(cls, phi: str, delta: str = "true", name: str = "custom") -> "Interpretation":
        return cls(parse(phi), parse(delta), name)

    def to_json(self) -> dict:
        return {"name": self.name, "phi": to_text(self.phi), "delta": to_text(self.delta)}


_REGISTRY_TEXT = {
    "identity": "E(x,y)",
    "complement": "~E(x,y) & x != y",
    "square": "x != y & (E(x,y) | exists z. E(x,z) & E(z,y))",
    "power-3": "x != y & dist<=3(x,y)",
}

REGISTRY: dict[str, Interpretation] = {
    name: Interpretation.from_text(text, name=name) for name, text in _REGISTRY_TEXT.items()
}


def get_interpretation(name: str) -> Interpretation:
    try:
        return REGISTRY[name]
    except KeyError:
        raise InterpretationError(
            f"unknown interpretation {name!r}; known: {', '.join(sorted(REGISTRY))}"
        ) from None


def domain(G: Graph, I: Interpretation) -> list[int]:
    return np.flatnonzero(unary_vector(G, I.delta)).tolist()


def edge_matrix(G: Graph, I: Interpretation, U: list[int] | None = None) -> np.ndarray:
    """``phi`` on ``U x U`` (rows and columns in the order of ``U``)."""
    if U is None:
        U = domain(G, I)
    M = pair_matrix(G, I.phi)
    idx = np.asarray(U, dtype=np.intp)
    return M[np.ix_(idx, idx)]


def _defect(M: np.ndarray) -> str | None:
    diag = np.flatnonzero(M.diagonal())
    if diag.size:
        return f"reflexive at position {int(diag[0])}"
    bad = np.argwhere(M != M.T)
    if bad.size:
        u, v = bad[0]
        return f"asymmetric at positions ({int(u)},{int(v)})"
    return None


def check_symmetric_irreflexive(G: Graph, phi: Formula) -> bool:
    return _defect(pair_matrix(G, phi)) is None


def apply_interpretation(G: Graph, I: Interpretation | str) -> Graph:
    """``I(G)``; ``origin`` of the result maps new ids to ids of ``G``."""
    if isinstance(I, str):
        I = get_interpretation(I)
    U = domain(G, I)
    M = edge_matrix(G, I, U)
    problem = _defect(M)
    if problem:
        raise InterpretationError(
            f"interpretation {I.name!r} is not a graph on {G!r}: {problem}"
        )
    adj = tuple(mask_of(np.flatnonzero(row).tolist()) for row in M)
    return Graph(len(U), adj, origin=tuple(U))


@dataclass(frozen=True)
class Instance:
    """An interpreted graph ``H = I(G)`` together with ``G``-distances on its vertices."""

    G: Graph
    I: Interpretation
    H: Graph

    @property
    def U(self) -> tuple[int, ...]:
        return self.H.origin

    @property
    def E(self) -> np.ndarray:
        return self.H.matrix

    @property
    def dist(self):
        from flipmc.graph import Pseudometric

        return Pseudometric(self.G.distances).restrict(self.U)


def instance(G: Graph, I: Interpretation | str) -> Instance:
    if isinstance(I, str):
        I = get_interpretation(I)
    return Instance(G, I, apply_interpretation(G, I))
