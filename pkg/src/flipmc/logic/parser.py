"""Recursive-descent parser for the text formula syntax.

Precedence, tightest first: ``~``, ``&``, ``|``, ``^``, ``->``.  ``&`` and
``|`` chains become n-ary nodes, ``^`` associates left, ``->`` right.  A
quantifier ``exists v.`` / ``forall v.`` scopes over everything to its right.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from flipmc.logic.syntax import (
    FALSE, TRUE, And, Color, Const, DistLe, Edge, Eq, Exists, Flag, Forall, Formula, Implies, Not,
    Or, Term, Var, Xor,
)

KEYWORDS = {"exists", "forall", "flag", "dist", "true", "false"}
_VAR = re.compile(r"[a-z][a-z0-9]*\Z")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<neq>!=)
  | (?P<le><=)
  | (?P<const>@[A-Za-z0-9_]+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()~&|^=,.])
    """,
    re.VERBOSE,
)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, what: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise FormulaSyntaxError(f"expected {what}, found {found}", t.pos)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.fail(repr(text))

    def formula(self) -> Formula:
        left = self.xor()
        if self.accept("->"):
            return Implies(left, self.formula())
        return left

    def xor(self) -> Formula:
        left = self.disjunction()
        while self.accept("^"):
            left = Xor(left, self.disjunction())
        return left

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.accept("|"):
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.accept("&"):
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        t = self.tok
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("("):
            inner = self.formula()
            self.expect(")")
            return inner
        if t.kind == "ident" and t.text in ("exists", "forall"):
            self.i += 1
            var = self.variable()
            self.expect(".")
            body = self.formula()
            return Exists(var, body) if t.text == "exists" else Forall(var, body)
        return self.atom()

    def variable(self) -> str:
        t = self.tok
        if t.kind != "ident" or not _VAR.match(t.text) or t.text in KEYWORDS:
            self.fail("variable")
        self.i += 1
        return t.text

    def term(self) -> Term:
        t = self.tok
        if t.kind == "const":
            self.i += 1
            return Const(t.text[1:])
        if t.kind == "ident" and _VAR.match(t.text) and t.text not in KEYWORDS:
            self.i += 1
            return Var(t.text)
        self.fail("term")

    def name(self) -> str:
        t = self.tok
        if t.kind not in ("ident", "int"):
            self.fail("name")
        self.i += 1
        return t.text

    def atom(self) -> Formula:
        t = self.tok
        if t.kind == "ident":
            if t.text == "true":
                self.i += 1
                return TRUE
            if t.text == "false":
                self.i += 1
                return FALSE
            if t.text == "E":
                self.i += 1
                self.expect("(")
                a = self.term()
                self.expect(",")
                b = self.term()
                self.expect(")")
                return Edge(a, b)
            if t.text.startswith("U_") and len(t.text) > 2:
                self.i += 1
                self.expect("(")
                a = self.term()
                self.expect(")")
                return Color(t.text[2:], a)
            if t.text == "flag":
                self.i += 1
                self.expect("(")
                name = self.name()
                self.expect(")")
                return Flag(name)
            if t.text == "dist":
                self.i += 1
                self.expect("<=")
                if self.tok.kind != "int":
                    self.fail("distance bound")
                bound = int(self.tok.text)
                self.i += 1
                self.expect("(")
                a = self.term()
                self.expect(",")
                b = self.term()
                self.expect(")")
                return DistLe(bound, a, b)
        if t.kind in ("ident", "const"):
            left = self.term()
            if self.accept("="):
                return Eq(left, self.term())
            if self.accept("!="):
                return Not(Eq(left, self.term()))
            self.fail("'=' or '!='")
        self.fail("formula")


def parse(text: str) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return phi
