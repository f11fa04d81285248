"""Abstract syntax for first-order formulas over colored graphs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    name: str

    def __str__(self):
        return "@" + self.name


Term = Union[Var, Const]


class Formula:
    __slots__ = ()

    def __str__(self):
        from flipmc.logic.printer import to_text

        return to_text(self)

    # operator sugar for building formulas in code
    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __xor__(self, other):
        return Xor(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True, slots=True, repr=False)
class Truth(Formula):
    value: bool

    def __repr__(self):
        return "TRUE" if self.value else "FALSE"


TRUE = Truth(True)
FALSE = Truth(False)


@dataclass(frozen=True, slots=True)
class Edge(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Color(Formula):
    name: str
    term: Term


@dataclass(frozen=True, slots=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Flag(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class DistLe(Formula):
    """``dist(left, right) <= bound`` in the underlying graph."""

    bound: int
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True, slots=True)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True, slots=True)
class Xor(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, slots=True)
class Forall(Formula):
    var: str
    body: Formula


ATOMS = (Truth, Edge, Color, Eq, Flag, DistLe)
QUANTIFIERS = (Exists, Forall)


def conj(*parts: Formula) -> Formula:
    """Conjunction that drops TRUE and collapses on FALSE."""
    args = []
    for p in parts:
        if p == TRUE:
            continue
        if p == FALSE:
            return FALSE
        args.append(p)
    if not args:
        return TRUE
    return args[0] if len(args) == 1 else And(tuple(args))


def disj(*parts: Formula) -> Formula:
    args = []
    for p in parts:
        if p == FALSE:
            continue
        if p == TRUE:
            return TRUE
        args.append(p)
    if not args:
        return FALSE
    return args[0] if len(args) == 1 else Or(tuple(args))


def neq(a: Term, b: Term) -> Formula:
    return Not(Eq(a, b))


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (And, Or)):
        return phi.args
    if isinstance(phi, (Xor, Implies)):
        return (phi.left, phi.right)
    if isinstance(phi, (Not, Exists, Forall)):
        return (phi.body,)
    return ()


def terms_of(phi: Formula) -> tuple[Term, ...]:
    if isinstance(phi, (Edge, Eq, DistLe)):
        return (phi.left, phi.right)
    if isinstance(phi, Color):
        return (phi.term,)
    return ()
