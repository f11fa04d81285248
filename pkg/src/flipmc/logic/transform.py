"""Syntactic operations: free variables, rank, size, substitution, edge rewriting."""
from __future__ import annotations

import itertools
from typing import Mapping

from flipmc.logic.syntax import (
    And, Color, Const, DistLe, Edge, Eq, Exists, Flag, Forall, Formula, Implies, Not, Or, Term,
    Truth, Var, Xor, children, terms_of,
)


class ArityError(ValueError):
    pass


def _memoized(fn):
    """Run a structural recursion once per distinct node object (formulas share subtrees)."""
    def outer(phi: Formula):
        memo: dict[int, object] = {}

        def rec(node: Formula):
            key = id(node)
            if key not in memo:
                memo[key] = fn(node, rec)
            return memo[key]

        return rec(phi)

    outer.__name__ = fn.__name__
    outer.__doc__ = fn.__doc__
    return outer


@_memoized
def free_vars(phi: Formula, rec) -> frozenset[str]:
    if isinstance(phi, (Exists, Forall)):
        return rec(phi.body) - {phi.var}
    out = {t.name for t in terms_of(phi) if isinstance(t, Var)}
    for c in children(phi):
        out |= rec(c)
    return frozenset(out)


@_memoized
def constants_of(phi: Formula, rec) -> frozenset[str]:
    out = {t.name for t in terms_of(phi) if isinstance(t, Const)}
    for c in children(phi):
        out |= rec(c)
    return frozenset(out)


@_memoized
def quantifier_rank(phi: Formula, rec) -> int:
    """Maximal quantifier nesting depth; ``dist<=k`` atoms count as rank 0."""
    below = max((rec(c) for c in children(phi)), default=0)
    return below + 1 if isinstance(phi, (Exists, Forall)) else below


@_memoized
def size(phi: Formula, rec) -> int:
    """Node count of the formula tree, counting each term occurrence as a node."""
    return 1 + len(terms_of(phi)) + sum(rec(c) for c in children(phi))


def count_nodes(phi: Formula, kind: type) -> int:
    @_memoized
    def count(node: Formula, rec) -> int:
        return int(isinstance(node, kind)) + sum(rec(c) for c in children(node))

    return count(phi)


def all_vars(phi: Formula) -> set[str]:
    return set(_all_vars(phi))


@_memoized
def _all_vars(phi: Formula, rec) -> frozenset[str]:
    out = {t.name for t in terms_of(phi) if isinstance(t, Var)}
    if isinstance(phi, (Exists, Forall)):
        out.add(phi.var)
    for c in children(phi):
        out |= rec(c)
    return frozenset(out)


def fresh_name(avoid: set[str], base: str = "v") -> str:
    for i in itertools.count():
        name = f"{base}{i}"
        if name not in avoid:
            return name


def _sub_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var) and t.name in mapping:
        return mapping[t.name]
    return t


def substitute(phi: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneously replace free variables, renaming bound ones to avoid capture."""
    mapping = {k: v for k, v in mapping.items() if k in free_vars(phi)}
    if not mapping:
        return phi
    incoming = {t.name for t in mapping.values() if isinstance(t, Var)}
    return _subst(phi, mapping, incoming, {})


def _subst(phi: Formula, mapping: dict[str, Term], incoming: set[str], memo: dict) -> Formula:
    if not mapping:
        return phi
    key = (id(phi), tuple(sorted(mapping.items(), key=lambda kv: kv[0])), frozenset(incoming))
    hit = memo.get(key)
    if hit is None:
        hit = memo[key] = _subst_node(phi, mapping, incoming, memo)
    return hit


def _subst_node(phi: Formula, mapping: dict[str, Term], incoming: set[str], memo: dict) -> Formula:
    if isinstance(phi, Truth | Flag):
        return phi
    if isinstance(phi, Edge):
        return Edge(_sub_term(phi.left, mapping), _sub_term(phi.right, mapping))
    if isinstance(phi, Eq):
        return Eq(_sub_term(phi.left, mapping), _sub_term(phi.right, mapping))
    if isinstance(phi, DistLe):
        return DistLe(phi.bound, _sub_term(phi.left, mapping), _sub_term(phi.right, mapping))
    if isinstance(phi, Color):
        return Color(phi.name, _sub_term(phi.term, mapping))
    if isinstance(phi, Not):
        return Not(_subst(phi.body, mapping, incoming, memo))
    if isinstance(phi, And):
        return And(tuple(_subst(a, mapping, incoming, memo) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(_subst(a, mapping, incoming, memo) for a in phi.args))
    if isinstance(phi, Xor):
        return Xor(
            _subst(phi.left, mapping, incoming, memo), _subst(phi.right, mapping, incoming, memo)
        )
    if isinstance(phi, Implies):
        return Implies(
            _subst(phi.left, mapping, incoming, memo), _subst(phi.right, mapping, incoming, memo)
        )
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k != phi.var}
        inner = {k: v for k, v in inner.items() if k in free_vars(phi.body)}
        var, body = phi.var, phi.body
        if inner and var in incoming:
            new = fresh_name(all_vars(body) | incoming | set(inner), base=var)
            body = _subst(body, {var: Var(new)}, {new}, memo)
            var = new
        return type(phi)(var, _subst(body, inner, incoming, memo))
    raise TypeError(f"not a formula: {phi!r}")


def rewrite_edges(rho: Formula, zeta: Formula, x: str = "x", y: str = "y") -> Formula:
    """Replace every ``E(t1,t2)`` in ``rho`` by ``E(t1,t2) ^ zeta[t1/x, t2/y]``.

    Edge atoms introduced through ``zeta`` are left alone.
    """
    extra = free_vars(zeta) - {x, y}
    if extra:
        raise ArityError(f"zeta must have free variables among {x},{y}; also has {sorted(extra)}")
    cache: dict[tuple[Term, Term], Formula] = {}

    def edge(t1: Term, t2: Term) -> Formula:
        key = (t1, t2)
        if key not in cache:
            cache[key] = substitute(zeta, {x: t1, y: t2})
        return Xor(Edge(t1, t2), cache[key])

    memo: dict[int, Formula] = {}

    def go(phi: Formula) -> Formula:
        key = id(phi)
        if key not in memo:
            memo[key] = step(phi)
        return memo[key]

    def step(phi: Formula) -> Formula:
        if isinstance(phi, Edge):
            return edge(phi.left, phi.right)
        if isinstance(phi, Not):
            return Not(go(phi.body))
        if isinstance(phi, And):
            return And(tuple(go(a) for a in phi.args))
        if isinstance(phi, Or):
            return Or(tuple(go(a) for a in phi.args))
        if isinstance(phi, Xor):
            return Xor(go(phi.left), go(phi.right))
        if isinstance(phi, Implies):
            return Implies(go(phi.left), go(phi.right))
        if isinstance(phi, (Exists, Forall)):
            return type(phi)(phi.var, go(phi.body))
        return phi

    return go(rho)
