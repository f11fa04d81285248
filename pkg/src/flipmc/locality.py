"""Partitions on which a relation is determined, for far pairs, by the cells alone.

Everything here works on local positions ``0..m-1`` of a universe ``U``: the
relation is an ``m x m`` boolean matrix and distances come from a
:class:`~flipmc.graph.Pseudometric` over the same positions.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from flipmc.graph import Pseudometric


@dataclass(frozen=True)
class Partition:
    cells: tuple[tuple[int, ...], ...]
    size: int

    def __post_init__(self):
        seen = sorted(v for c in self.cells for v in c)
        if seen != list(range(self.size)):
            raise ValueError("cells must be a disjoint cover of 0..size-1")
        if any(not c for c in self.cells):
            raise ValueError("cells must be nonempty")

    @classmethod
    def single(cls, size: int) -> "Partition":
        return cls((tuple(range(size)),) if size else (), size)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        order: dict[int, list[int]] = {}
        for v, lab in enumerate(labels):
            order.setdefault(lab, []).append(v)
        return cls(tuple(tuple(c) for c in order.values()), len(labels))

    @property
    def cell_of(self) -> np.ndarray:
        out = np.empty(self.size, dtype=np.intp)
        for i, c in enumerate(self.cells):
            out[list(c)] = i
        return out

    def __len__(self):
        return len(self.cells)

    def to_json(self, universe: Sequence[int] | None = None) -> dict:
        name = (lambda v: int(universe[v])) if universe is not None else int
        return {
            "cells": [[name(v) for v in c] for c in self.cells],
            "sizes": [len(c) for c in self.cells],
        }


class GenericStatus(enum.Enum):
    GENERICALLY_E = "generically-E"
    GENERICALLY_NOT_E = "generically-not-E"
    NO_FAR_PAIRS = "no-far-pairs"
    CONTRADICTORY = "contradictory"


Violation = tuple[int, int, int, int]


def first_conflict(E: np.ndarray, far: np.ndarray, rows: np.ndarray,
                   cols: np.ndarray) -> Violation | None:
    """First ``(u,v,u',v')`` with equal row/column labels, both pairs far, ``E(u,v)`` and not ``E(u',v')``.

    Conflicts are ordered by (row label, column label) in order of first
    appearance; within one, the earliest pairs in row-major order are used.
    """
    if E.size == 0:
        return None
    rows = np.asarray(rows)
    cols = np.asarray(cols)
    _, r_id = np.unique(rows, return_inverse=True, axis=0 if rows.ndim > 1 else None)
    _, c_id = np.unique(cols, return_inverse=True, axis=0 if cols.ndim > 1 else None)
    r_id, c_id = r_id.ravel(), c_id.ravel()
    nc = int(c_id.max()) + 1
    key = r_id[:, None] * nc + c_id[None, :]
    pos = np.flatnonzero((far & E).ravel())
    neg = np.flatnonzero((far & ~E).ravel())
    if not pos.size or not neg.size:
        return None
    both = np.intersect1d(key.ravel()[pos], key.ravel()[neg])
    if not both.size:
        return None
    k = int(both.min())
    m = E.shape[1]
    p = int(pos[key.ravel()[pos] == k][0])
    q = int(neg[key.ravel()[neg] == k][0])
    return p // m, p % m, q // m, q % m


def check_r_generic(E: np.ndarray, dist: Pseudometric, P: Partition, r: int) -> Violation | None:
    """A violating quadruple, or ``None`` if far pairs agree on ``E`` within every cell pair."""
    cell = P.cell_of
    return first_conflict(np.asarray(E, dtype=bool), dist.far(r), cell, cell)


def refine_partition(E: np.ndarray, dist: Pseudometric, r: int,
                     start: Partition | None = None) -> Partition:
    """Split cells until :func:`check_r_generic` finds nothing."""
    E = np.asarray(E, dtype=bool)
    far = dist.far(r)
    m = E.shape[0]
    labels = (start or Partition.single(m)).cell_of.copy() if m else np.zeros(0, dtype=np.intp)
    t = int(labels.max()) + 1 if m else 0
    while True:
        bad = first_conflict(E, far, labels, labels)
        if bad is None:
            break
        u, v, u2, v2 = bad
        C, D = labels[u], labels[v]
        inC = labels == C
        C1 = inC & far[:, v] & E[:, v]
        if C1.sum() < inC.sum():
            labels[inC & ~C1] = t
        else:
            inD = labels == D
            D1 = inD & far[u2, :] & E[u2, :]
            labels[inD & ~D1] = t
        t += 1
    return _canonical(labels)


def _canonical(labels: np.ndarray) -> Partition:
    """Cells ordered by their smallest member."""
    return Partition.from_labels(labels.tolist())


def generic_status(E: np.ndarray, dist: Pseudometric, C: Sequence[int], D: Sequence[int],
                   r: int) -> GenericStatus:
    ci = np.asarray(C, dtype=np.intp)
    di = np.asarray(D, dtype=np.intp)
    far = dist.matrix[np.ix_(ci, di)] > r
    sub = np.asarray(E, dtype=bool)[np.ix_(ci, di)]
    yes = bool((far & sub).any())
    no = bool((far & ~sub).any())
    if yes and no:
        return GenericStatus.CONTRADICTORY
    if yes:
        return GenericStatus.GENERICALLY_E
    if no:
        return GenericStatus.GENERICALLY_NOT_E
    return GenericStatus.NO_FAR_PAIRS


def status_matrix(E: np.ndarray, dist: Pseudometric, P: Partition, r: int) -> list[list[str]]:
    return [[generic_status(E, dist, C, D, r).value for D in P.cells] for C in P.cells]
