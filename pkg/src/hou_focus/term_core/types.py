"""Simple types: base, arrow, set-of and type variables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import TypeMismatch


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Arrow:
    dom: "Type"
    cod: "Type"

    def __str__(self):
        left = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{left}>{self.cod}"


@dataclass(frozen=True)
class SetOf:
    elem: "Type"

    def __str__(self):
        return f"set({self.elem})"


@dataclass(frozen=True)
class TyVar:
    id: int

    def __str__(self):
        return f"?{self.id}"


Type = Base | Arrow | SetOf | TyVar

E = Base("e")
T = Base("t")

_tyvar_ids = itertools.count(1)


def fresh_tyvar() -> TyVar:
    return TyVar(next(_tyvar_ids))


def arrows(*tys: Type) -> Type:
    """``arrows(a, b, c)`` is ``a > b > c``."""
    result = tys[-1]
    for ty in reversed(tys[:-1]):
        result = Arrow(ty, result)
    return result


def split_arrow(ty: Type, n: int | None = None) -> tuple[list[Type], Type]:
    """Peel up to ``n`` argument types (all of them when ``n`` is None)."""
    args = []
    while isinstance(ty, Arrow) and (n is None or len(args) < n):
        args.append(ty.dom)
        ty = ty.cod
    return args, ty


def has_tyvar(ty: Type) -> bool:
    if isinstance(ty, TyVar):
        return True
    if isinstance(ty, Arrow):
        return has_tyvar(ty.dom) or has_tyvar(ty.cod)
    if isinstance(ty, SetOf):
        return has_tyvar(ty.elem)
    return False


def base_names(ty: Type) -> set[str]:
    if isinstance(ty, Base):
        return {ty.name}
    if isinstance(ty, Arrow):
        return base_names(ty.dom) | base_names(ty.cod)
    if isinstance(ty, SetOf):
        return base_names(ty.elem)
    return set()


def order_of_type(ty: Type) -> int:
    if isinstance(ty, Base):
        return 1
    if isinstance(ty, SetOf):
        return order_of_type(ty.elem)
    if isinstance(ty, Arrow):
        return max(order_of_type(ty.dom) + 1, order_of_type(ty.cod))
    raise TypeMismatch(f"order of a type containing a type variable: {ty}")


# -- first-order unification of types, used for partial inference ---------

def resolve(ty: Type, subst: dict[int, Type]) -> Type:
    if isinstance(ty, TyVar):
        if ty.id in subst:
            return resolve(subst[ty.id], subst)
        return ty
    if isinstance(ty, Arrow):
        return Arrow(resolve(ty.dom, subst), resolve(ty.cod, subst))
    if isinstance(ty, SetOf):
        return SetOf(resolve(ty.elem, subst))
    return ty


def _occurs(v: int, ty: Type, subst) -> bool:
    ty = resolve(ty, subst)
    if isinstance(ty, TyVar):
        return ty.id == v
    if isinstance(ty, Arrow):
        return _occurs(v, ty.dom, subst) or _occurs(v, ty.cod, subst)
    if isinstance(ty, SetOf):
        return _occurs(v, ty.elem, subst)
    return False


def unify_types(a: Type, b: Type, subst: dict[int, Type]) -> None:
    """Extend ``subst`` in place so that ``a`` and ``b`` coincide."""
    a = resolve(a, subst)
    b = resolve(b, subst)
    if a == b:
        return
    if isinstance(a, TyVar):
        if _occurs(a.id, b, subst):
            raise TypeMismatch(f"cyclic type: {a} = {b}")
        subst[a.id] = b
    elif isinstance(b, TyVar):
        unify_types(b, a, subst)
    elif isinstance(a, Arrow) and isinstance(b, Arrow):
        unify_types(a.dom, b.dom, subst)
        unify_types(a.cod, b.cod, subst)
    elif isinstance(a, SetOf) and isinstance(b, SetOf):
        unify_types(a.elem, b.elem, subst)
    else:
        raise TypeMismatch(f"cannot match type {a} with {b}")
