"""VC dimension, shatter function and order-k dualities of finite binary relations."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Hashable, Sequence

import numpy as np

from flipmc.graph import Graph, _bits, mask_of

DEFAULT_K_MAX = 8


@dataclass(frozen=True)
class BiRelation:
    """``E`` as a boolean ``|A| x |B|`` matrix, indexed by positions in ``A`` and ``B``."""

    A: tuple[Hashable, ...]
    B: tuple[Hashable, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=bool).reshape(len(self.A), len(self.B))
        m.setflags(write=False)
        object.__setattr__(self, "A", tuple(self.A))
        object.__setattr__(self, "B", tuple(self.B))
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pairs(cls, a: int, b: int, pairs) -> "BiRelation":
        m = np.zeros((a, b), dtype=bool)
        for i, j in pairs:
            if not (0 <= i < a and 0 <= j < b):
                raise ValueError(f"pair ({i},{j}) out of range for a={a}, b={b}")
            m[i, j] = True
        return cls(tuple(range(a)), tuple(range(b)), m)

    @classmethod
    def from_graph(cls, G: Graph, A: Sequence[int] | None = None,
                   B: Sequence[int] | None = None) -> "BiRelation":
        A = list(range(G.n)) if A is None else list(A)
        B = list(range(G.n)) if B is None else list(B)
        m = G.matrix[np.ix_(np.asarray(A, dtype=np.intp), np.asarray(B, dtype=np.intp))]
        return cls(tuple(A), tuple(B), m)

    @cached_property
    def columns(self) -> list[int]:
        """Bitset over ``A``-positions for each ``b``."""
        return [mask_of(np.flatnonzero(col).tolist()) for col in self.matrix.T]

    @cached_property
    def rows(self) -> list[int]:
        return [mask_of(np.flatnonzero(row).tolist()) for row in self.matrix]

    def to_json(self) -> dict:
        return {
            "a": len(self.A),
            "b": len(self.B),
            "pairs": [[int(i), int(j)] for i, j in np.argwhere(self.matrix)],
        }


# shattering


def _num_traces(columns: list[int], mask: int) -> int:
    return len({c & mask for c in columns})


def vc_dimension(R: BiRelation) -> int:
    """Largest ``d`` such that some ``d``-subset of ``A`` is shattered by the columns."""
    cols = R.columns
    if not cols:
        return 0
    level = [
        (i,) for i in range(len(R.A)) if _num_traces(cols, 1 << i) == 2
    ]
    d = 0
    while level:
        d += 1
        shattered = set(level)
        nxt = []
        for base in level:
            for i in range(base[-1] + 1, len(R.A)):
                cand = base + (i,)
                if any(cand[:j] + cand[j + 1:] not in shattered for j in range(len(cand) - 1)):
                    continue
                mask = sum(1 << a for a in cand)
                if _num_traces(cols, mask) == 1 << len(cand):
                    nxt.append(cand)
        level = nxt
    return d


def shatter_function(R: BiRelation, m: int) -> int:
    """``max`` over ``m``-subsets ``A'`` of the number of distinct traces on ``A'``."""
    cols = R.columns
    if not cols:
        return 0
    m = max(0, min(m, len(R.A)))
    best = 0
    for sub in itertools.combinations(range(len(R.A)), m):
        best = max(best, _num_traces(cols, sum(1 << a for a in sub)))
        if best == min(len(cols), 1 << m):
            break
    return best


def sauer_shelah_bound(m: int, d: int) -> int:
    return sum(comb(m, i) for i in range(d + 1))


# hitting sets


def _reduce(families: Sequence[int]) -> list[int] | None:
    """Deduplicate and drop families that contain another; ``None`` if one is empty."""
    fams = sorted(set(families), key=lambda f: (f.bit_count(), f))
    if fams and fams[0] == 0:
        return None
    reduced: list[int] = []
    for f in fams:
        if not any(g & f == g for g in reduced):
            reduced.append(f)
    return reduced


def _packing(unhit: list[int]) -> int:
    """Size of a greedy set of pairwise disjoint families: a lower bound on any hitting set."""
    used, count = 0, 0
    for f in unhit:
        if not f & used:
            used |= f
            count += 1
    return count


def _within(fams: list[int], k: int) -> list[int] | None:
    def search(chosen: list[int], unhit: list[int], budget: int) -> list[int] | None:
        if not unhit:
            return sorted(chosen)
        if budget == 0 or _packing(unhit) > budget:
            return None
        # branch on the smallest unhit family
        pivot = min(unhit, key=lambda f: (f.bit_count(), f))
        for e in _bits(pivot):
            bit = 1 << e
            chosen.append(e)
            got = search(chosen, [f for f in unhit if not f & bit], budget - 1)
            chosen.pop()
            if got is not None:
                return got
        return None

    return search([], fams, k)


class HittingSets:
    """Decision queries "is there a hitting set of size <= k" for one set system."""

    def __init__(self, families: Sequence[int]):
        self.fams = _reduce(families)
        self.lower = 0 if self.fams is None else _packing(self.fams)
        self.greedy = None if self.fams is None else sorted(_greedy_cover(self.fams))

    def within(self, k: int) -> list[int] | None:
        if self.fams is None or k < self.lower:
            return None
        if len(self.greedy) <= k and len(self.greedy) == self.lower:
            return self.greedy
        return _within(self.fams, k)


def min_hitting_set(families: Sequence[int], limit: int) -> list[int] | None:
    """A minimum hitting set if one of size <= ``limit`` exists (iterative deepening)."""
    hs = HittingSets(families)
    for k in range(limit + 1):
        got = hs.within(k)
        if got is not None:
            return got
    return None


def _greedy_cover(fams: list[int]) -> list[int]:
    unhit = list(fams)
    chosen = []
    while unhit:
        counts: dict[int, int] = {}
        for f in unhit:
            for e in _bits(f):
                counts[e] = counts.get(e, 0) + 1
        e = min(counts, key=lambda k: (-counts[k], k))
        chosen.append(e)
        unhit = [f for f in unhit if not f >> e & 1]
    return chosen


# duality


class NoDuality(Exception):
    def __init__(self, k_max: int):
        super().__init__(f"no duality of order <= {k_max}")
        self.k_max = k_max


@dataclass(frozen=True)
class DualityWitness:
    side: str  # "A" or "B"
    positions: tuple[int, ...]
    elements: tuple[Hashable, ...]

    @property
    def order(self) -> int:
        return len(self.positions)

    def to_json(self) -> dict:
        return {"side": self.side, "set": list(self.elements), "order": self.order}


def side_families(R: BiRelation, side: str) -> list[int]:
    """A-side: for each ``b`` the set ``{a : not E(a,b)}``; B-side: for each ``a`` the set ``{b : E(a,b)}``."""
    if side == "A":
        full = (1 << len(R.A)) - 1
        return [full & ~c for c in R.columns]
    if side == "B":
        return R.rows
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def find_duality(R: BiRelation, k_max: int = DEFAULT_K_MAX) -> DualityWitness:
    """Minimum-order duality witness; ties go to the B-side."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    systems = {side: HittingSets(side_families(R, side)) for side in ("B", "A")}
    for k in range(k_max + 1):
        for side in ("B", "A"):
            got = systems[side].within(k)
            if got is not None:
                universe = R.A if side == "A" else R.B
                return DualityWitness(side, tuple(got), tuple(universe[p] for p in got))
    raise NoDuality(k_max)


def is_duality(R: BiRelation, side: str, positions: Sequence[int]) -> bool:
    """Full-scan check of the witness condition."""
    idx = np.asarray(list(positions), dtype=np.intp)
    if side == "A":
        if len(R.B) == 0:
            return True
        return bool((~R.matrix[idx, :]).any(axis=0).all()) if idx.size else False
    if len(R.A) == 0:
        return True
    return bool(R.matrix[:, idx].any(axis=1).all()) if idx.size else False
