"""Range of a binary formula: how far apart its satisfying pairs can be."""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from flipmc.graph import DIST_INF, Graph
from flipmc.logic.compile import pair_matrix
from flipmc.logic.semantics import evaluate_pairs
from flipmc.logic.syntax import Formula
from flipmc.logic.transform import ArityError, free_vars


def range_of(G: Graph, phi: Formula, U: Iterable[int] | None = None, x: str = "x", y: str = "y",
             *, oracle: bool = False) -> float | int:
    """Largest ``dist(u,v)`` over ``u,v`` in ``U`` with ``phi(u,v)``.

    Returns 0 when no pair satisfies ``phi`` and ``math.inf`` when a
    satisfying pair is disconnected.  ``oracle=True`` evaluates with the
    reference evaluator instead of the compiled kernel.
    """
    extra = free_vars(phi) - {x, y}
    if extra:
        raise ArityError(f"range_of needs a formula in {x},{y}; also free: {sorted(extra)}")
    M = satisfied(G, phi, U, x, y, oracle=oracle)
    idx = np.arange(G.n) if U is None else np.asarray(sorted(set(U)), dtype=np.intp)
    D = G.distances[np.ix_(idx, idx)]
    if not M.any():
        return 0
    d = int(D[M].max())
    return math.inf if d >= DIST_INF else d


def satisfied(G: Graph, phi: Formula, U: Iterable[int] | None = None, x: str = "x", y: str = "y",
              *, oracle: bool = False) -> np.ndarray:
    M = np.array(evaluate_pairs(G, phi, x, y), dtype=bool) if oracle else pair_matrix(G, phi, x, y)
    if M.size == 0:
        return M.reshape(G.n, G.n)
    if U is not None:
        idx = np.asarray(sorted(set(U)), dtype=np.intp)
        M = M[np.ix_(idx, idx)]
    return M
