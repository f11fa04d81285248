"""Construction and brute-force verification of the witness set ``S``.

Given a relation ``E`` on ``U`` and a partition on which ``E`` is determined
for pairs at distance ``> r``, the set built here makes ``E(u,v)`` a function
of the profiles ``E(u,S)`` and ``E(S,v)`` for all pairs at distance ``> 5r``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from flipmc.graph import Graph, Pseudometric
from flipmc.interpret import Instance, Interpretation, instance
from flipmc.locality import Partition, Violation, first_conflict, refine_partition
from flipmc.vc import DEFAULT_K_MAX, BiRelation, NoDuality, find_duality


@dataclass(frozen=True)
class Large:
    triple: tuple[int, int, int]


@dataclass(frozen=True)
class Small:
    center: int


@dataclass(frozen=True)
class Split:
    C1: tuple[int, ...]
    C2: tuple[int, ...]
    centers: tuple[int, int]


CellKind = Union[Large, Small, Split]


def classify_cell(C: Sequence[int], dist: Pseudometric, r: int) -> CellKind:
    cells = sorted(C)
    if not cells:
        raise ValueError("cannot classify an empty cell")
    M = dist.matrix
    kept: list[int] = []
    for c in cells:
        if all(M[c, k] > 2 * r for k in kept):
            kept.append(c)
            if len(kept) == 3:
                return Large(tuple(kept))
    if len(kept) == 1:
        return Small(kept[0])
    idx = np.asarray(cells, dtype=np.intp)
    sub = M[np.ix_(idx, idx)]
    ok = np.flatnonzero((sub <= 2 * r).all(axis=0))
    if ok.size:
        return Small(cells[int(ok[0])])
    s1, s2 = kept
    C1 = tuple(c for c in cells if c != s2 and M[c, s1] <= 2 * r)
    C2 = tuple(c for c in cells if c not in set(C1))
    return Split(C1, C2, (s1, s2))


def kind_is_valid(kind: CellKind, C: Sequence[int], dist: Pseudometric, r: int) -> bool:
    M = dist.matrix
    if isinstance(kind, Large):
        a, b, c = kind.triple
        return all(x in C for x in kind.triple) and min(M[a, b], M[a, c], M[b, c]) > 2 * r
    if isinstance(kind, Small):
        return kind.center in C and all(M[c, kind.center] <= 2 * r for c in C)
    return (
        sorted(kind.C1 + kind.C2) == sorted(C)
        and kind_is_valid(Small(kind.centers[0]), kind.C1, dist, r)
        and kind_is_valid(Small(kind.centers[1]), kind.C2, dist, r)
    )


@dataclass
class SSet:
    S: list[int]
    provenance: dict[int, list[str]]
    r: int
    k_observed: int
    t_effective: int
    cells: list[tuple[int, ...]]
    kinds: list[CellKind]
    k_max_used: int
    escalations: list[str] = field(default_factory=list)

    @property
    def bound(self) -> int:
        t, k = self.t_effective, self.k_observed
        return 4 * t + k * t * t

    @property
    def within_bound(self) -> bool:
        return len(self.S) <= self.bound

    def to_json(self, universe: Sequence[int] | None = None) -> dict:
        name = (lambda v: int(universe[v])) if universe is not None else int
        return {
            "S": [name(v) for v in self.S],
            "provenance": {str(name(v)): tags for v, tags in sorted(self.provenance.items())},
            "size": len(self.S),
            "r": self.r,
            "t_effective": self.t_effective,
            "k_observed": self.k_observed,
            "bound": self.bound,
            "within_bound": self.within_bound,
            "escalations": self.escalations,
        }


def build_s_set(E: np.ndarray, dist: Pseudometric, P: Partition, r: int,
                k_max: int = DEFAULT_K_MAX) -> SSet:
    E = np.asarray(E, dtype=bool)
    provenance: dict[int, list[str]] = {}

    def add(v: int, tag: str):
        provenance.setdefault(int(v), []).append(tag)

    cells: list[tuple[int, ...]] = []
    kinds: list[CellKind] = []
    for C in P.cells:
        kind = classify_cell(C, dist, r)
        if isinstance(kind, Split):
            for part, center in zip((kind.C1, kind.C2), kind.centers):
                cells.append(part)
                kinds.append(Small(center))
        else:
            cells.append(tuple(sorted(C)))
            kinds.append(kind)
    for i, kind in enumerate(kinds):
        if isinstance(kind, Large):
            for v in kind.triple:
                add(v, f"large:{i}")
        else:
            add(kind.center, f"small:{i}")

    k_obs, k_used, escalations = 0, k_max, []
    for i, C in enumerate(cells):
        for j, D in enumerate(cells):
            rel = BiRelation(C, D, E[np.ix_(C, D)])
            try:
                w = find_duality(rel, k_used)
            except NoDuality:
                k_new = max(len(C), len(D), k_used + 1)
                escalations.append(f"cells ({i},{j}): k_max {k_used} -> {k_new}")
                k_used = k_new
                w = find_duality(rel, k_used)
            k_obs = max(k_obs, w.order)
            for v in w.elements:
                add(v, f"duality:{i},{j}:{w.side}")

    return SSet(
        S=sorted(provenance),
        provenance=provenance,
        r=r,
        k_observed=k_obs,
        t_effective=len(cells),
        cells=cells,
        kinds=kinds,
        k_max_used=k_used,
        escalations=escalations,
    )


def verify_s_set(E: np.ndarray, dist: Pseudometric, S: Sequence[int],
                 radius: int) -> Violation | None:
    """First ``(u,v,u',v')`` at distance ``> radius`` with equal ``S``-profiles but different ``E``."""
    E = np.asarray(E, dtype=bool)
    m = E.shape[0]
    if m <= 1:
        return None
    idx = np.asarray(sorted(set(S)), dtype=np.intp)
    if idx.size:
        rows, cols = E[:, idx], E[idx, :].T
    else:
        rows = cols = np.zeros(m, dtype=np.intp)
    return first_conflict(E, dist.far(radius), rows, cols)


@dataclass
class SResult:
    inst: Instance
    partition: Partition
    sset: SSet
    radius: int

    @property
    def S(self) -> list[int]:
        return self.sset.S


def s_for_instance(inst: Instance, r: int, k_max: int = DEFAULT_K_MAX) -> SResult:
    E, dist = inst.E, inst.dist
    P = refine_partition(E, dist, r)
    return SResult(inst, P, build_s_set(E, dist, P, r, k_max), 5 * r)


def s_for_interpretation(G: Graph, I: Interpretation | str, r: int,
                         k_max: int = DEFAULT_K_MAX) -> SResult:
    """``S`` (as vertex ids of ``H = I(G)``) certified at radius ``5r``."""
    return s_for_instance(instance(G, I), r, k_max)
