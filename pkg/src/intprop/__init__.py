"""Propagation-based solver for polynomial constraints over integer intervals."""

from .intervals import ALL, EMPTY, Interval, OpCounters
from .model import (
    CSP,
    Add,
    Div,
    Expr,
    Lit,
    Mul,
    MultAtom,
    Neg,
    ParseError,
    PolynomialConstraint,
    Pow,
    PowerAtom,
    Root,
    Sub,
    TrivialConstraint,
    Var,
    normalize,
    parse,
)
from .rules import build_rules, eval_int, is_bounds_consistent
from .decompose import DecomposedCSP, compute_aux_domains, decompose, VARIANTS
from .engine import FIXPOINT, PropagationLimit, Solver
from .search import (
    Infeasible,
    SearchStats,
    UnboundedAfterPropagation,
    maximize,
    solve_all,
    verify_solution,
)

__all__ = [
    "ALL", "EMPTY", "Interval", "OpCounters",
    "CSP", "Add", "Div", "Expr", "Lit", "Mul", "MultAtom", "Neg",
    "ParseError", "PolynomialConstraint", "Pow", "PowerAtom", "Root", "Sub",
    "TrivialConstraint", "Var", "normalize", "parse",
    "build_rules", "eval_int", "is_bounds_consistent",
    "DecomposedCSP", "compute_aux_domains", "decompose", "VARIANTS",
    "FIXPOINT", "PropagationLimit", "Solver",
    "Infeasible", "SearchStats", "UnboundedAfterPropagation",
    "maximize", "solve_all", "verify_solution",
]

__version__ = "0.1.0"
