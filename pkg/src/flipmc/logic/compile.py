"""Lower a formula to a flat node program for the evaluation kernels.

Terms become *slots* of an assignment vector: free variables first, then
one slot per constant (pre-filled), then one fresh slot per compiled
quantifier.  Flags are resolved at compile time and constant subtrees are
folded away.  A node whose value depends on at most one variable slot gets a
memo row in the kernel.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from flipmc.graph import Graph
from flipmc.logic.semantics import EvaluationError
from flipmc.logic.syntax import (
    And, Color, Const, DistLe, Edge, Eq, Exists, Flag, Forall, Formula, Implies, Not, Or, Term,
    Truth, Var, Xor,
)

OP_FALSE, OP_TRUE, OP_EDGE, OP_EQ, OP_COLOR, OP_DIST = range(6)
OP_NOT, OP_AND, OP_OR, OP_XOR, OP_IMPL, OP_EXISTS, OP_FORALL = range(6, 13)

_ATOM_OPS = {OP_FALSE, OP_TRUE, OP_EDGE, OP_EQ, OP_COLOR, OP_DIST}


@dataclass
class Program:
    op: np.ndarray
    a0: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    kids: np.ndarray
    memo_row: np.ndarray
    memo_slot: np.ndarray
    n_memo: int
    init: np.ndarray  # initial slot values; -1 where unassigned
    root: int
    free: tuple[str, ...]
    n: int
    adj: np.ndarray
    colors: np.ndarray
    dist: np.ndarray

    @property
    def num_nodes(self) -> int:
        return len(self.op)

    def slot(self, var: str) -> int:
        return self.free.index(var)


class _Builder:
    def __init__(self, G: Graph, free: Sequence[str]):
        self.G = G
        self.free = tuple(free)
        self.slots: dict[str, int] = {v: i for i, v in enumerate(self.free)}
        self.init: list[int] = [-1] * len(self.free)
        self.const_slot: dict[str, int] = {}
        self.color_index: dict[str, int] = {}
        self.rows: list[tuple[int, int, int, int]] = [(OP_FALSE, 0, 0, 0), (OP_TRUE, 0, 0, 0)]
        self.deps: list[frozenset[int]] = [frozenset(), frozenset()]
        self.cost: list[float] = [0.0, 0.0]
        self.kids: list[int] = []
        self.cache: dict[tuple, int] = {}
        self.uses_dist = False

    def new_slot(self, value: int = -1) -> int:
        self.init.append(value)
        return len(self.init) - 1

    def term(self, t: Term, scope: dict[str, int]) -> int:
        if isinstance(t, Var):
            try:
                return scope[t.name]
            except KeyError:
                raise EvaluationError(f"unbound variable {t.name!r}") from None
        slot = self.const_slot.get(t.name)
        if slot is None:
            try:
                value = self.G.constants[t.name]
            except KeyError:
                raise EvaluationError(f"unknown constant '@{t.name}'") from None
            slot = self.const_slot[t.name] = self.new_slot(value)
        return slot

    def var_deps(self, *slots: int) -> frozenset[int]:
        return frozenset(s for s in slots if self.init[s] < 0)

    def add(self, op: int, a0=0, a1=0, a2=0, deps=frozenset(), cost=1.0) -> int:
        self.rows.append((op, a0, a1, a2))
        self.deps.append(deps)
        self.cost.append(cost)
        return len(self.rows) - 1

    def build(self, phi: Formula, scope: dict[str, int]) -> int:
        key = (id(phi), tuple(sorted(scope.items())))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        node = self._build(phi, scope)
        self.cache[key] = node
        return node

    def _build(self, phi: Formula, scope: dict[str, int]) -> int:
        if isinstance(phi, Truth):
            return int(phi.value)
        if isinstance(phi, Flag):
            try:
                return int(self.G.flags[phi.name])
            except KeyError:
                raise EvaluationError(f"unknown flag {phi.name!r}") from None
        if isinstance(phi, (Edge, Eq)):
            s, t = self.term(phi.left, scope), self.term(phi.right, scope)
            op = OP_EDGE if isinstance(phi, Edge) else OP_EQ
            return self.add(op, s, t, 0, self.var_deps(s, t))
        if isinstance(phi, DistLe):
            s, t = self.term(phi.left, scope), self.term(phi.right, scope)
            self.uses_dist = True
            return self.add(OP_DIST, phi.bound, s, t, self.var_deps(s, t))
        if isinstance(phi, Color):
            if phi.name not in self.G.colors:
                raise EvaluationError(f"unknown color 'U_{phi.name}'")
            idx = self.color_index.setdefault(phi.name, len(self.color_index))
            s = self.term(phi.term, scope)
            return self.add(OP_COLOR, idx, s, 0, self.var_deps(s))
        if isinstance(phi, Not):
            c = self.build(phi.body, scope)
            if c < 2:
                return 1 - c
            return self.add(OP_NOT, c, 0, 0, self.deps[c], self.cost[c])
        if isinstance(phi, (And, Or)):
            absorbing = 0 if isinstance(phi, And) else 1
            parts = []
            for a in phi.args:
                c = self.build(a, scope)
                if c == absorbing:
                    return absorbing
                if c == 1 - absorbing:
                    continue
                parts.append(c)
            if not parts:
                return 1 - absorbing
            if len(parts) == 1:
                return parts[0]
            parts = list(dict.fromkeys(parts))
            parts.sort(key=lambda c: self.cost[c])
            start = len(self.kids)
            self.kids.extend(parts)
            deps = frozenset().union(*(self.deps[c] for c in parts))
            op = OP_AND if absorbing == 0 else OP_OR
            return self.add(op, start, len(self.kids), 0, deps, sum(self.cost[c] for c in parts))
        if isinstance(phi, (Xor, Implies)):
            left, right = self.build(phi.left, scope), self.build(phi.right, scope)
            if isinstance(phi, Xor):
                if left < 2 and right < 2:
                    return left ^ right
                if left < 2 or right < 2:
                    const, other = (left, right) if left < 2 else (right, left)
                    if const == 0:
                        return other
                    return self.add(OP_NOT, other, 0, 0, self.deps[other], self.cost[other])
                op = OP_XOR
            else:
                if left == 0 or right == 1:
                    return 1
                if left == 1:
                    return right
                if right == 0:
                    return self.add(OP_NOT, left, 0, 0, self.deps[left], self.cost[left])
                op = OP_IMPL
            return self.add(
                op, left, right, 0, self.deps[left] | self.deps[right],
                self.cost[left] + self.cost[right],
            )
        if isinstance(phi, (Exists, Forall)):
            slot = self.new_slot()
            inner = dict(scope)
            inner[phi.var] = slot
            body = self.build(phi.body, inner)
            if body < 2:
                return body
            op = OP_EXISTS if isinstance(phi, Exists) else OP_FORALL
            n = max(self.G.n, 1)
            return self.add(op, slot, body, 0, self.deps[body] - {slot}, n * self.cost[body] + 1)
        raise TypeError(f"not a formula: {phi!r}")


def compile_formula(G: Graph, phi: Formula, free: Sequence[str] = ()) -> Program:
    """Compile ``phi`` for evaluation on ``G`` with the given free variables as slots 0.."""
    b = _Builder(G, free)
    root = b.build(phi, dict(b.slots))
    ops = np.array(b.rows, dtype=np.int32).reshape(-1, 4)
    memo_row = np.full(len(b.rows), -1, dtype=np.int32)
    memo_slot = np.full(len(b.rows), -1, dtype=np.int32)
    n_memo = 0
    for i, (op, *_rest) in enumerate(b.rows):
        if op in _ATOM_OPS:
            continue
        deps = b.deps[i]
        if len(deps) <= 1:
            memo_row[i] = n_memo
            memo_slot[i] = next(iter(deps)) if deps else -1
            n_memo += 1
    if b.color_index:
        colors = np.zeros((len(b.color_index), G.n), dtype=np.uint8)
        for name, idx in b.color_index.items():
            colors[idx, sorted(G.colors[name])] = 1
    else:
        colors = np.zeros((1, max(G.n, 1)), dtype=np.uint8)
    dist = G.distances if b.uses_dist else np.zeros((1, 1), dtype=np.int32)
    return Program(
        op=np.ascontiguousarray(ops[:, 0]),
        a0=np.ascontiguousarray(ops[:, 1]),
        a1=np.ascontiguousarray(ops[:, 2]),
        a2=np.ascontiguousarray(ops[:, 3]),
        kids=np.array(b.kids or [0], dtype=np.int32),
        memo_row=memo_row,
        memo_slot=memo_slot,
        n_memo=n_memo,
        init=np.array(b.init, dtype=np.int32),
        root=root,
        free=b.free,
        n=G.n,
        adj=np.ascontiguousarray(G.matrix, dtype=np.uint8),
        colors=np.ascontiguousarray(colors),
        dist=np.ascontiguousarray(dist, dtype=np.int32),
    )


def _evaluator(prog: Program):
    from flipmc._kernels import Evaluator

    return Evaluator(prog)


def check(G: Graph, phi: Formula, assignment: dict[str, int] | None = None) -> bool:
    """Kernel-backed truth value; agrees with :func:`~flipmc.logic.semantics.evaluate`."""
    assignment = dict(assignment or {})
    for name, v in assignment.items():
        if not 0 <= v < G.n:
            raise EvaluationError(f"variable {name!r} assigned invalid vertex {v}")
    names = sorted(assignment)
    prog = compile_formula(G, phi, names)
    return _evaluator(prog).holds([assignment[v] for v in names])


def pair_matrix(G: Graph, phi: Formula, x: str = "x", y: str = "y") -> np.ndarray:
    """Boolean matrix ``M[u, v] = phi(u, v)`` over all vertex pairs."""
    if G.n == 0:
        return np.zeros((0, 0), dtype=bool)
    prog = compile_formula(G, phi, (x, y))
    return _evaluator(prog).pairs(0, 1).astype(bool)


def unary_vector(G: Graph, phi: Formula, x: str = "x") -> np.ndarray:
    if G.n == 0:
        return np.zeros(0, dtype=bool)
    prog = compile_formula(G, phi, (x,))
    return _evaluator(prog).vector(0).astype(bool)
