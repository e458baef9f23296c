"""Terms of the simply-typed lambda calculus.

Bound variables are de Bruijn indices (``Bound(0)`` is the innermost binder).
Binder names on ``Abs`` are kept for display only and take no part in
equality, so ``==`` on terms is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from ..errors import TypeMismatch
from .types import Arrow, Type, TyVar, fresh_tyvar, has_tyvar, resolve, unify_types


@dataclass(frozen=True)
class Const:
    name: str
    type: Type
    primary: bool = field(default=False, compare=False)

    def __repr__(self):
        return f"{self.name}{'!' if self.primary else ''}"


@dataclass(frozen=True)
class FreeVar:
    name: str
    type: Type

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Bound:
    index: int

    def __repr__(self):
        return f"#{self.index}"


@dataclass(frozen=True)
class Abs:
    name: str = field(compare=False)
    type: Type
    body: "Term"

    def __repr__(self):
        return f"(\\{self.name}:{self.type}. {self.body!r})"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"

    def __repr__(self):
        return f"{self.fn!r}({self.arg!r})"


Term = Const | FreeVar | Bound | Abs | App
Substitution = Mapping[str, Term]


def apply(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def strip_abs(t: Term) -> tuple[list[Abs], Term]:
    binders = []
    while isinstance(t, Abs):
        binders.append(t)
        t = t.body
    return binders, t


def wrap_abs(binders: list[Abs], body: Term) -> Term:
    for b in reversed(binders):
        body = Abs(b.name, b.type, body)
    return body


# -- de Bruijn plumbing ----------------------------------------------------

def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    if d == 0:
        return t
    if isinstance(t, Bound):
        return Bound(t.index + d) if t.index >= cutoff else t
    if isinstance(t, Abs):
        return Abs(t.name, t.type, shift(t.body, d, cutoff + 1))
    if isinstance(t, App):
        return App(shift(t.fn, d, cutoff), shift(t.arg, d, cutoff))
    return t


def _subst_bound(t: Term, j: int, s: Term) -> Term:
    # replace Bound(j) by s, where s is already shifted for depth j
    if isinstance(t, Bound):
        if t.index == j:
            return s
        return t
    if isinstance(t, Abs):
        return Abs(t.name, t.type, _subst_bound(t.body, j + 1, shift(s, 1)))
    if isinstance(t, App):
        return App(_subst_bound(t.fn, j, s), _subst_bound(t.arg, j, s))
    return t


def instantiate(body: Term, arg: Term) -> Term:
    """Beta-contract ``(lam. body) arg``."""
    return shift(_subst_bound(body, 0, shift(arg, 1)), -1)


def loose_bound(t: Term, depth: int = 0) -> bool:
    """True when ``t`` refers to a binder outside itself."""
    if isinstance(t, Bound):
        return t.index >= depth
    if isinstance(t, Abs):
        return loose_bound(t.body, depth + 1)
    if isinstance(t, App):
        return loose_bound(t.fn, depth) or loose_bound(t.arg, depth)
    return False


# -- traversal -------------------------------------------------------------

def iter_atoms(t: Term) -> Iterator[Term]:
    if isinstance(t, Abs):
        yield from iter_atoms(t.body)
    elif isinstance(t, App):
        yield from iter_atoms(t.fn)
        yield from iter_atoms(t.arg)
    else:
        yield t


def free_vars(t: Term) -> set[str]:
    return {a.name for a in iter_atoms(t) if isinstance(a, FreeVar)}


def free_var_types(t: Term) -> dict[str, Type]:
    return {a.name: a.type for a in iter_atoms(t) if isinstance(a, FreeVar)}


def const_names(t: Term) -> set[str]:
    return {a.name for a in iter_atoms(t) if isinstance(a, Const)}


def size(t: Term) -> int:
    """Number of constant and variable occurrences."""
    return sum(1 for _ in iter_atoms(t))


def alpha_equal(a: Term, b: Term) -> bool:
    return a == b


def map_types(t: Term, f) -> Term:
    """Rebuild ``t`` with ``f`` applied to every type annotation."""
    if isinstance(t, Const):
        return Const(t.name, f(t.type), t.primary)
    if isinstance(t, FreeVar):
        return FreeVar(t.name, f(t.type))
    if isinstance(t, Abs):
        return Abs(t.name, f(t.type), map_types(t.body, f))
    if isinstance(t, App):
        return App(map_types(t.fn, f), map_types(t.arg, f))
    return t


def term_has_tyvar(t: Term) -> bool:
    if isinstance(t, (Const, FreeVar)):
        return has_tyvar(t.type)
    if isinstance(t, Abs):
        return has_tyvar(t.type) or term_has_tyvar(t.body)
    if isinstance(t, App):
        return term_has_tyvar(t.fn) or term_has_tyvar(t.arg)
    return False


# -- positions: paths of child indices (Abs: 0 = body; App: 0 = fn, 1 = arg)

def subterm_at(t: Term, path) -> Term | None:
    for step in path:
        if isinstance(t, Abs) and step == 0:
            t = t.body
        elif isinstance(t, App):
            t = t.fn if step == 0 else t.arg
        else:
            return None
    return t


def replace_at(t: Term, path, new: Term) -> Term:
    if not path:
        return new
    step, rest = path[0], path[1:]
    if isinstance(t, Abs):
        return Abs(t.name, t.type, replace_at(t.body, rest, new))
    if isinstance(t, App):
        if step == 0:
            return App(replace_at(t.fn, rest, new), t.arg)
        return App(t.fn, replace_at(t.arg, rest, new))
    raise IndexError(f"no position {path} in term")


def positions(t: Term, path=()) -> Iterator[tuple[tuple[int, ...], Term]]:
    yield path, t
    if isinstance(t, Abs):
        yield from positions(t.body, path + (0,))
    elif isinstance(t, App):
        yield from positions(t.fn, path + (0,))
        yield from positions(t.arg, path + (1,))


# -- typing ----------------------------------------------------------------

def _infer(t: Term, ctx: tuple, tsubst: dict) -> Type:
    if isinstance(t, (Const, FreeVar)):
        return t.type
    if isinstance(t, Bound):
        if t.index >= len(ctx):
            raise TypeMismatch(f"loose bound variable #{t.index}")
        return ctx[t.index]
    if isinstance(t, Abs):
        return Arrow(t.type, _infer(t.body, (t.type,) + ctx, tsubst))
    fty = resolve(_infer(t.fn, ctx, tsubst), tsubst)
    aty = _infer(t.arg, ctx, tsubst)
    if isinstance(fty, Arrow):
        try:
            unify_types(fty.dom, aty, tsubst)
        except TypeMismatch:
            raise TypeMismatch(
                f"argument of type {resolve(aty, tsubst)} given to a function "
                f"expecting {resolve(fty.dom, tsubst)}: {t!r}") from None
        return fty.cod
    if isinstance(fty, TyVar):
        result = fresh_tyvar()
        unify_types(fty, Arrow(aty, result), tsubst)
        return result
    raise TypeMismatch(f"application of a non-function of type {fty}: {t!r}")


def infer_type(t: Term, sig=None, ctx: tuple = (), tsubst: dict | None = None) -> Type:
    """Return the type of ``t``; TyVars may remain when free variables are
    only partially typed.  ``tsubst`` collects the type equations found."""
    if tsubst is None:
        tsubst = {}
    ty = resolve(_infer(t, ctx, tsubst), tsubst)
    if sig is not None:
        sig.check_type_names(t)
    return ty


# -- normalization ---------------------------------------------------------

def beta_normal(t: Term) -> Term:
    if isinstance(t, Abs):
        return Abs(t.name, t.type, beta_normal(t.body))
    head, args = spine(t)
    if isinstance(head, Abs) and args:
        return beta_normal(apply(instantiate(head.body, args[0]), *args[1:]))
    return apply(head, *(beta_normal(a) for a in args))


def _head_type(head: Term, ctx: tuple) -> Type:
    if isinstance(head, Bound):
        return ctx[head.index]
    return head.type


def _expand(t: Term, ty, ctx: tuple) -> Term:
    # t is neutral (non-Abs) and already eta-long inside
    if not isinstance(ty, Arrow):
        return t
    inner = (ty.dom,) + ctx
    var = _expand(Bound(0), ty.dom, inner)
    return Abs("u", ty.dom, _expand(App(shift(t, 1), var), ty.cod, inner))


def _eta(t: Term, ctx: tuple) -> tuple[Term, Type | None]:
    if isinstance(t, Abs):
        body, bty = _eta(t.body, (t.type,) + ctx)
        return Abs(t.name, t.type, body), (Arrow(t.type, bty) if bty is not None else None)
    head, args = spine(t)
    hty = _head_type(head, ctx)
    new_args = []
    for a in args:
        new_args.append(_eta(a, ctx)[0])
        hty = hty.cod if isinstance(hty, Arrow) else None
    result = apply(head, *new_args)
    return _expand(result, hty, ctx), hty


def eta_long(t: Term, ctx: tuple = ()) -> Term:
    """Eta-expand a beta-normal term.  Subterms whose type is still a TyVar
    are left as they are."""
    return _eta(t, ctx)[0]


def normalize(t: Term, ctx: tuple = ()) -> Term:
    """Beta-normal, eta-long form."""
    return eta_long(beta_normal(t), ctx)


# -- substitution of free variables ----------------------------------------

def _subst_free(t: Term, sigma: Substitution) -> Term:
    if isinstance(t, FreeVar):
        image = sigma.get(t.name)
        return t if image is None else image
    if isinstance(t, Abs):
        return Abs(t.name, t.type, _subst_free(t.body, sigma))
    if isinstance(t, App):
        return App(_subst_free(t.fn, sigma), _subst_free(t.arg, sigma))
    return t


def apply_subst(sigma: Substitution, t: Term, check: bool = True) -> Term:
    """Replace free variables by their images.

    Images are closed with respect to bound variables, so no capture can
    happen.  The result is not normalized.
    """
    if not sigma:
        return t
    if check:
        for name, ty in free_var_types(t).items():
            if name in sigma:
                if loose_bound(sigma[name]):
                    raise TypeMismatch(f"image of {name} has loose bound variables")
                ity = infer_type(sigma[name])
                if not has_tyvar(ty) and not has_tyvar(ity) and ity != ty:
                    raise TypeMismatch(f"{name} has type {ty} but its image has type {ity}")
    return _subst_free(t, sigma)


def compose(sigma: Substitution, binding: Substitution) -> dict[str, Term]:
    """Idempotent composition: ``binding`` after ``sigma``."""
    out = {name: normalize(_subst_free(img, binding)) for name, img in sigma.items()}
    for name, img in binding.items():
        out.setdefault(name, img)
    return out
