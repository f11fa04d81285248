"""Tarskian evaluation of formulas on a :class:`~flipmc.graph.Graph`.

This is the reference semantics every other evaluation route is checked
against.  Results are memoized per (subformula, values of its free
variables) within one call.
"""
from __future__ import annotations

from typing import Mapping

from flipmc.graph import DIST_INF, Graph
from flipmc.logic.syntax import (
    And, Color, Const, DistLe, Edge, Eq, Exists, Flag, Forall, Formula, Implies, Not, Or, Term,
    Truth, Var, Xor, children,
)
from flipmc.logic.transform import free_vars


class EvaluationError(ValueError):
    pass


class _Evaluator:
    def __init__(self, G: Graph):
        self.G = G
        self.adj = G.adj
        self.memo: dict[tuple, bool] = {}
        self.fv: dict[int, tuple[str, ...]] = {}
        self._dist = None

    def free(self, phi: Formula) -> tuple[str, ...]:
        key = id(phi)
        got = self.fv.get(key)
        if got is None:
            got = self.fv[key] = tuple(sorted(free_vars(phi)))
            for c in children(phi):
                self.free(c)
        return got

    def term(self, t: Term, a: Mapping[str, int]) -> int:
        if isinstance(t, Var):
            try:
                return a[t.name]
            except KeyError:
                raise EvaluationError(f"unbound variable {t.name!r}") from None
        try:
            return self.G.constants[t.name]
        except KeyError:
            raise EvaluationError(f"unknown constant '@{t.name}'") from None

    def dist(self):
        if self._dist is None:
            self._dist = self.G.distances
        return self._dist

    def ev(self, phi: Formula, a: dict[str, int]) -> bool:
        if isinstance(phi, Truth):
            return phi.value
        if isinstance(phi, Edge):
            return bool(self.adj[self.term(phi.left, a)] >> self.term(phi.right, a) & 1)
        if isinstance(phi, Eq):
            return self.term(phi.left, a) == self.term(phi.right, a)
        if isinstance(phi, Color):
            try:
                members = self.G.colors[phi.name]
            except KeyError:
                raise EvaluationError(f"unknown color 'U_{phi.name}'") from None
            return self.term(phi.term, a) in members
        if isinstance(phi, Flag):
            try:
                return self.G.flags[phi.name]
            except KeyError:
                raise EvaluationError(f"unknown flag {phi.name!r}") from None
        if isinstance(phi, DistLe):
            d = int(self.dist()[self.term(phi.left, a), self.term(phi.right, a)])
            return d < DIST_INF and d <= phi.bound

        fv = self.free(phi)
        try:
            key = (id(phi), tuple(a[v] for v in fv))
        except KeyError as exc:
            raise EvaluationError(f"unbound variable {exc.args[0]!r}") from None
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = self._compound(phi, a)
        self.memo[key] = out
        return out

    def _compound(self, phi: Formula, a: dict[str, int]) -> bool:
        if isinstance(phi, Not):
            return not self.ev(phi.body, a)
        if isinstance(phi, And):
            return all(self.ev(c, a) for c in phi.args)
        if isinstance(phi, Or):
            return any(self.ev(c, a) for c in phi.args)
        if isinstance(phi, Xor):
            return self.ev(phi.left, a) != self.ev(phi.right, a)
        if isinstance(phi, Implies):
            return (not self.ev(phi.left, a)) or self.ev(phi.right, a)
        if isinstance(phi, (Exists, Forall)):
            want = isinstance(phi, Exists)
            saved = a.get(phi.var)
            had = phi.var in a
            try:
                for v in range(self.G.n):
                    a[phi.var] = v
                    if self.ev(phi.body, a) == want:
                        return want
                return not want
            finally:
                if had:
                    a[phi.var] = saved
                else:
                    a.pop(phi.var, None)
        raise TypeError(f"not a formula: {phi!r}")


def evaluate(G: Graph, phi: Formula, assignment: Mapping[str, int] | None = None) -> bool:
    """Truth value of ``phi`` in ``G`` under ``assignment``."""
    a = dict(assignment or {})
    for name, v in a.items():
        if not (0 <= v < G.n):
            raise EvaluationError(f"variable {name!r} assigned invalid vertex {v}")
    missing = free_vars(phi) - set(a)
    if missing:
        raise EvaluationError(f"unbound variable(s) {sorted(missing)}")
    return _Evaluator(G).ev(phi, a)


def evaluate_pairs(G: Graph, phi: Formula, x: str = "x", y: str = "y") -> list[list[bool]]:
    """``phi(u, v)`` for all vertex pairs, sharing one memo table."""
    ev = _Evaluator(G)
    out = []
    for u in range(G.n):
        row = []
        for v in range(G.n):
            row.append(ev.ev(phi, {x: u, y: v}))
        out.append(row)
    return out
