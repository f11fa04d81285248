"""Formula pretty-printer; output re-parses to the same tree."""
from __future__ import annotations

from flipmc.logic.syntax import (
    And, Color, DistLe, Edge, Eq, Exists, Flag, Forall, Formula, Implies, Not, Or, Truth, Xor,
)

# binding strength, loosest first; quantifiers bind loosest of all
_QUANT, _IMPL, _XOR, _OR, _AND, _NOT, _ATOM = range(7)


def _prec(phi: Formula) -> int:
    if isinstance(phi, (Exists, Forall)):
        return _QUANT
    if isinstance(phi, Implies):
        return _IMPL
    if isinstance(phi, Xor):
        return _XOR
    if isinstance(phi, Or):
        return _OR
    if isinstance(phi, And):
        return _AND
    if isinstance(phi, Not) and not isinstance(phi.body, Eq):
        return _NOT
    return _ATOM


def to_text(phi: Formula) -> str:
    return _fmt(phi, _QUANT)


def _wrap(phi: Formula, need: int) -> str:
    text = _fmt(phi, need)
    return f"({text})" if _prec(phi) < need else text


def _fmt(phi: Formula, need: int) -> str:
    if isinstance(phi, Truth):
        return "true" if phi.value else "false"
    if isinstance(phi, Edge):
        return f"E({phi.left},{phi.right})"
    if isinstance(phi, Color):
        return f"U_{phi.name}({phi.term})"
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Flag):
        return f"flag({phi.name})"
    if isinstance(phi, DistLe):
        return f"dist<={phi.bound}({phi.left},{phi.right})"
    if isinstance(phi, Not):
        if isinstance(phi.body, Eq):
            return f"{phi.body.left} != {phi.body.right}"
        return "~" + _wrap(phi.body, _NOT)
    if isinstance(phi, And):
        return " & ".join(_wrap(a, _AND + 1) for a in phi.args)
    if isinstance(phi, Or):
        return " | ".join(_wrap(a, _OR + 1) for a in phi.args)
    if isinstance(phi, Xor):
        return f"{_wrap(phi.left, _XOR)} ^ {_wrap(phi.right, _XOR + 1)}"
    if isinstance(phi, Implies):
        return f"{_wrap(phi.left, _IMPL + 1)} -> {_wrap(phi.right, _IMPL)}"
    if isinstance(phi, Exists):
        return f"exists {phi.var}. {_fmt(phi.body, _QUANT)}"
    if isinstance(phi, Forall):
        return f"forall {phi.var}. {_fmt(phi.body, _QUANT)}"
    raise TypeError(f"not a formula: {phi!r}")
