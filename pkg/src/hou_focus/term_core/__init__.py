"""Simply-typed lambda calculus kernel."""

from .logic import alt, eq, exists, forall, member
from .signature import Signature
from .syntax import format_term, parse_term, parse_type
from .terms import (Abs, App, Bound, Const, FreeVar, Substitution, Term, alpha_equal, apply,
                    apply_subst, beta_normal, compose, free_var_types, free_vars, infer_type,
                    normalize, size, spine)
from .types import E, T, Arrow, Base, SetOf, Type, TyVar, arrows, order_of_type

__all__ = [
    "Abs", "App", "Arrow", "Base", "Bound", "Const", "E", "FreeVar", "SetOf", "Signature",
    "Substitution", "T", "Term", "TyVar", "Type", "alpha_equal", "alt", "apply", "apply_subst",
    "arrows", "beta_normal", "compose", "eq", "exists", "forall", "format_term", "free_var_types",
    "free_vars", "infer_type", "member", "normalize", "order_of_type", "parse_term", "parse_type",
    "size", "spine",
]
