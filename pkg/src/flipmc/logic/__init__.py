"""First-order logic over colored graphs: syntax, parsing, semantics, rewriting."""
from flipmc.logic.compile import Program, check, compile_formula, pair_matrix, unary_vector
from flipmc.logic.measure import range_of
from flipmc.logic.parser import FormulaSyntaxError, parse
from flipmc.logic.printer import to_text
from flipmc.logic.semantics import EvaluationError, evaluate, evaluate_pairs
from flipmc.logic.syntax import (
    FALSE, TRUE, And, Color, Const, DistLe, Edge, Eq, Exists, Flag, Forall, Formula, Implies, Not,
    Or, Truth, Var, Xor, conj, disj, neq,
)
from flipmc.logic.transform import (
    ArityError, constants_of, free_vars, quantifier_rank, rewrite_edges, size, substitute,
)

__all__ = [
    "FALSE", "TRUE", "And", "ArityError", "Color", "Const", "DistLe", "Edge", "Eq",
    "EvaluationError", "Exists", "Flag", "Forall", "Formula", "FormulaSyntaxError", "Implies",
    "Not", "Or", "Program", "Truth", "Var", "Xor", "check", "compile_formula", "pair_matrix", "unary_vector", "conj", "constants_of",
    "disj", "evaluate", "evaluate_pairs", "free_vars", "neq", "parse", "quantifier_rank", "range_of",
    "rewrite_edges", "size", "substitute", "to_text",
]
