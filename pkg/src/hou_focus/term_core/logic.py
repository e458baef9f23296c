"""Logical vocabulary.

Connectives are ordinary constants.  Quantifiers, equality, membership and
the focus-value formers ``alt<n>`` are families of constants indexed by a
type; an instance is a plain ``Const`` whose type fixes the index, so
unification treats each instance as a rigid head.
"""

from __future__ import annotations

import re

from ..errors import ParseError, TypeMismatch
from .terms import Abs, Bound, Const, Term, apply, shift
from .types import Arrow, SetOf, T, Type, arrows, fresh_tyvar, resolve, split_arrow, unify_types

AND = Const("and", arrows(T, T, T))
OR = Const("or", arrows(T, T, T))
IMP = Const("imp", arrows(T, T, T))
NOT = Const("not", Arrow(T, T))

CONNECTIVES = {c.name: c.type for c in (AND, OR, IMP, NOT)}

FAMILIES = ("forall", "exists", "eq", "in")
_ALT = re.compile(r"alt(\d+)$")


def is_family(name: str) -> bool:
    return name in FAMILIES or _ALT.match(name) is not None


def alt_arity(name: str) -> int | None:
    m = _ALT.match(name)
    return int(m.group(1)) if m else None


def forall(ty: Type) -> Const:
    return Const("forall", Arrow(Arrow(ty, T), T))


def exists(ty: Type) -> Const:
    return Const("exists", Arrow(Arrow(ty, T), T))


def eq(ty: Type) -> Const:
    return Const("eq", arrows(ty, ty, T))


def member(ty: Type) -> Const:
    return Const("in", arrows(ty, SetOf(ty), T))


def alt(n: int, gd_type: Type) -> Const:
    args, elem = split_arrow(gd_type, n)
    if len(args) < n:
        raise TypeMismatch(f"alt{n} needs a function of at least {n} arguments, got {gd_type}")
    return Const(f"alt{n}", Arrow(gd_type, SetOf(elem)))


def instance_type(name: str, first_arg: Type, tsubst: dict) -> Type:
    """Type of the family member named ``name`` whose first argument has
    type ``first_arg``.  May extend ``tsubst`` when ``first_arg`` is only
    partially known."""
    if name in ("forall", "exists"):
        ty = fresh_tyvar()
        unify_types(first_arg, Arrow(ty, T), tsubst)
        return resolve(Arrow(Arrow(ty, T), T), tsubst)
    if name == "eq":
        return arrows(first_arg, first_arg, T)
    if name == "in":
        return arrows(first_arg, SetOf(first_arg), T)
    n = alt_arity(name)
    if n is None:
        raise ParseError(f"{name} is not a family constant")
    gty = resolve(first_arg, tsubst)
    args, rest = [], gty
    for _ in range(n):
        if not isinstance(rest, Arrow):
            dom, cod = fresh_tyvar(), fresh_tyvar()
            unify_types(rest, Arrow(dom, cod), tsubst)
            rest = resolve(rest, tsubst)
        args.append(rest.dom)
        rest = rest.cod
    return resolve(Arrow(first_arg, SetOf(rest)), tsubst)


def only_formula(np: Term, vp: Term, gd: Term, n: int, ty: Type, gd_type: Type) -> Term:
    """``forall P. in(P, alt_n(gd)) and P(np) imp P = vp`` (unnormalized).

    ``np`` may mention loose bound variables; they are shifted under the
    new binder.
    """
    p = Bound(0)
    np, vp, gd = shift(np, 1), shift(vp, 1), shift(gd, 1)
    body = apply(IMP,
                 apply(AND, apply(member(ty), p, apply(alt(n, gd_type), gd)), apply(p, np)),
                 apply(eq(ty), p, vp))
    return apply(forall(ty), Abs("P", ty, body))


def also_formula(np: Term, vp: Term, gd: Term, n: int, ty: Type, gd_type: Type) -> Term:
    """``exists P. in(P, alt_n(gd)) and P(np) and not P = vp``."""
    p = Bound(0)
    np, vp, gd = shift(np, 1), shift(vp, 1), shift(gd, 1)
    body = apply(AND,
                 apply(AND, apply(member(ty), p, apply(alt(n, gd_type), gd)), apply(p, np)),
                 apply(NOT, apply(eq(ty), p, vp)))
    return apply(exists(ty), Abs("P", ty, body))

