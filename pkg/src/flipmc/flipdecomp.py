"""Guarded flips ``F(H)`` of an interpreted graph and the bounded-range formula producing them.

For ``H = I(G)`` and a guard ``c_1..c_s`` of ``H``-vertices, the flip
relation ``R`` collects the trace pairs of far ``H``-edges.  ``psi`` together
with the expansion ``Ghat`` of ``G`` (constants ``c_i`` and flags ``f_A_B``)
reproduces ``F(H)`` by interpretation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from flipmc.graph import FlipSpec, Graph, Pseudometric, apply_flip, traces
from flipmc.interpret import Instance, Interpretation, apply_interpretation, instance
from flipmc.logic import (
    And, Const, DistLe, Flag, Formula, Not, Or, Var, conj, neq, range_of, substitute, to_text,
)
from flipmc.logic.syntax import Xor
from flipmc.slemma import build_s_set, verify_s_set
from flipmc.locality import refine_partition
from flipmc.vc import DEFAULT_K_MAX

Label = int  # bitmask over guard positions


class DecompositionError(ValueError):
    pass


def const_name(i: int) -> str:
    return f"c{i + 1}"


def flag_name(A: Label, B: Label) -> str:
    A, B = min(A, B), max(A, B)
    return f"f_{A}_{B}"


def build_flip_relation(H: Graph, dist: Pseudometric, S_enum: Sequence[int],
                        r: int) -> frozenset[tuple[Label, Label]]:
    """Pairs of trace labels joined by some ``H``-edge of ``G``-distance ``> r`` (symmetric)."""
    lab = traces(H, S_enum)
    far_edges = np.argwhere(H.matrix & dist.far(r))
    return frozenset((lab[u], lab[v]) for u, v in far_edges.tolist())


def pad_guard(S: Sequence[int], s: int | None) -> list[int]:
    S = list(S)
    if s is None or len(S) >= s:
        return S
    if not S:
        raise DecompositionError(f"cannot pad an empty guard to arity {s}")
    return S + [S[-1]] * (s - len(S))


@dataclass
class Decomposition:
    inst: Instance
    S_enum: list[int]
    labels: tuple[Label, ...]
    R: frozenset[tuple[Label, Label]]
    FH: Graph
    psi: Formula
    Ghat: Graph
    r: int
    notes: list[str] = field(default_factory=list)

    @property
    def H(self) -> Graph:
        return self.inst.H

    @property
    def delta(self) -> Formula:
        return self.inst.I.delta

    @property
    def flip(self) -> FlipSpec:
        return FlipSpec(self.labels, self.R)

    @property
    def realized(self) -> list[Label]:
        return sorted(set(self.labels))

    def interpretation(self) -> Interpretation:
        return Interpretation(self.psi, self.delta, name=f"psi[{self.inst.I.name}]")

    def to_json(self) -> dict:
        return {
            "interpretation": self.inst.I.to_json(),
            "r": self.r,
            "S_enum": self.S_enum,
            "S_enum_in_G": [self.inst.U[v] for v in self.S_enum],
            "R": sorted([list(p) for p in self.R]),
            "H": self.H.to_json(),
            "FH": self.FH.to_json(),
            "Ghat": self.Ghat.to_json(),
            "psi": to_text(self.psi),
            "notes": self.notes,
        }


def part_formulas(I: Interpretation, s: int, realized: Sequence[Label], var: str) -> dict[Label, Formula]:
    """``P_A(var)`` for each realized trace ``A``; the atoms ``phi(var, c_i)`` are shared objects."""
    v = Var(var)
    delta = substitute(I.delta, {"x": v})
    pos = [substitute(I.phi, {"x": v, "y": Const(const_name(i))}) for i in range(s)]
    neg = [Not(p) for p in pos]
    return {
        A: conj(delta, *[pos[i] if A >> i & 1 else neg[i] for i in range(s)])
        for A in realized
    }


def alpha_formula(I: Interpretation, s: int, realized: Sequence[Label]) -> Formula:
    Px = part_formulas(I, s, realized, "x")
    Py = part_formulas(I, s, realized, "y")
    disjuncts = [
        And((Flag(flag_name(A, B)), Px[A], Py[B])) for A in realized for B in realized
    ]
    return Or(tuple(disjuncts)) if len(disjuncts) != 1 else disjuncts[0]


def assemble_psi(I: Interpretation, alpha: Formula, r: int, with_dist: bool = True) -> Formula:
    x, y = Var("x"), Var("y")
    parts = [Xor(I.phi, alpha), neq(x, y)]
    if with_dist:
        parts.append(DistLe(r, x, y))
    return And(tuple(parts))


def build_decomposition(G: Graph, I: Interpretation | str | Instance, S_enum: Sequence[int],
                        r: int, s: int | None = None) -> Decomposition:
    inst = I if isinstance(I, Instance) else instance(G, I)
    H = inst.H
    notes: list[str] = []
    S_enum = pad_guard(S_enum, s)
    if not S_enum and H.n:
        raise DecompositionError("guard is empty but H has vertices")
    for v in S_enum:
        H.check_vertex(v)
    clash = {const_name(i) for i in range(len(S_enum))} & set(G.constants)
    if clash:
        raise DecompositionError(f"G already uses constant names {sorted(clash)}")
    labels = traces(H, S_enum)
    R = build_flip_relation(H, inst.dist, S_enum, r)
    FH = apply_flip(H, FlipSpec(labels, R))
    realized = sorted(set(labels))
    flags = {flag_name(A, B): (A, B) in R for A in realized for B in realized if A <= B}
    constants = {const_name(i): inst.U[v] for i, v in enumerate(S_enum)}
    Ghat = G.expand(constants=constants, flags=flags)
    if H.n == 0:
        notes.append("H is empty; psi is phi restricted to distance r")
    alpha = alpha_formula(inst.I, len(S_enum), realized) if realized else Or(())
    psi = assemble_psi(inst.I, alpha, r)
    return Decomposition(inst, list(S_enum), labels, R, FH, psi, Ghat, r, notes)


def witness_guard(inst: Instance, r: int, k_max: int = DEFAULT_K_MAX) -> tuple[list[int], int]:
    """A guard ``S`` certified at radius ``r``, and the refinement radius it came from.

    Refinement radii ``r, r-1, .., 0`` are tried in turn; the construction at
    refinement radius ``r'`` is certified at ``5r'``, so ``r' = 0`` always works.
    """
    E, dist = inst.E, inst.dist
    for rr in range(r, -1, -1):
        P = refine_partition(E, dist, rr)
        sset = build_s_set(E, dist, P, rr, k_max)
        if verify_s_set(E, dist, sset.S, r) is None:
            return sset.S, rr
    raise AssertionError("refinement radius 0 must certify every radius")


def decompose(G: Graph, I: Interpretation | str, r: int,
              k_max: int = DEFAULT_K_MAX) -> Decomposition:
    """Decomposition with the witness guard from :func:`witness_guard`."""
    inst = instance(G, I)
    if inst.H.n == 0:
        return build_decomposition(G, inst, [], r)
    S, rr = witness_guard(inst, r, k_max)
    d = build_decomposition(G, inst, S, r)
    d.notes.append(f"guard from refinement radius {rr}, |S| = {len(S)}")
    return d


# verification


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"check": self.name, "ok": self.ok, "detail": self.detail}


def verify_decomposition(D: Decomposition, H: Graph | None = None, *,
                         oracle: bool = False) -> list[Check]:
    """(1) ``F(H) = I_psi(Ghat)``; (2) range of ``psi`` at most ``r``; (3) ``F(H)`` is the guarded flip of ``H``."""
    H = D.H if H is None else H
    out = []

    try:
        got = apply_interpretation(D.Ghat, D.interpretation()) if not oracle else _oracle_interp(D)
    except ValueError as exc:
        out.append(Check("interpretation-equals-flip", False, str(exc)))
    else:
        if got.same_edges(D.FH):
            out.append(Check("interpretation-equals-flip", True))
        else:
            diff = np.argwhere(got.matrix != D.FH.matrix)
            u, v = (int(a) for a in diff[0]) if diff.size else (-1, -1)
            out.append(Check(
                "interpretation-equals-flip", False,
                f"edge {u}-{v}: I_psi says {bool(got.matrix[u, v])}, F(H) says {bool(D.FH.matrix[u, v])}"
                if diff.size else f"vertex counts differ: {got.n} vs {D.FH.n}",
            ))

    rng = range_of(D.Ghat, D.psi, D.inst.U, oracle=oracle)
    out.append(Check("range-at-most-r", rng <= D.r, f"range {rng}, r = {D.r}"))

    guard_ok = tuple(traces(H, D.S_enum)) == tuple(D.labels)
    back = apply_flip(D.FH, FlipSpec(D.labels, D.R))
    ok = guard_ok and back.same_edges(H)
    detail = "" if ok else ("labels are not the guard traces" if not guard_ok
                            else "re-flipping F(H) does not give H")
    out.append(Check("guarded-flip-of-H", ok, detail))
    return out


def _oracle_interp(D: Decomposition) -> Graph:
    from flipmc.logic import evaluate

    U = D.inst.U
    M = np.zeros((len(U), len(U)), dtype=bool)
    for i, u in enumerate(U):
        if not evaluate(D.Ghat, D.delta, {"x": u}):
            raise DecompositionError(f"delta fails on {u}")
        for j, v in enumerate(U):
            M[i, j] = evaluate(D.Ghat, D.psi, {"x": u, "y": v})
    return Graph.from_matrix(M)


def toggled(D: Decomposition) -> Decomposition:
    """Copy with one realized label pair toggled in ``R`` and ``F(H)`` recomputed; ``psi`` and ``Ghat`` unchanged."""
    lab = np.asarray(D.labels)
    for A in D.realized:
        for B in D.realized:
            if A > B:
                continue
            us, vs = np.flatnonzero(lab == A), np.flatnonzero(lab == B)
            if A == B and len(us) < 2:
                continue
            R = set(D.R) ^ {(A, B), (B, A)}
            FH = apply_flip(D.H, FlipSpec(D.labels, frozenset(R)))
            return Decomposition(D.inst, D.S_enum, D.labels, frozenset(R), FH, D.psi, D.Ghat, D.r,
                                 D.notes + [f"mutation: toggled ({A},{B})"])
    raise DecompositionError("no label pair with two distinct vertices to toggle")


def without_dist(D: Decomposition) -> Decomposition:
    """Copy whose ``psi`` lacks the distance conjunct."""
    psi = And(tuple(a for a in D.psi.args if not isinstance(a, DistLe)))
    return Decomposition(D.inst, D.S_enum, D.labels, D.R, D.FH, psi, D.Ghat, D.r,
                         D.notes + ["mutation: dropped dist conjunct"])
