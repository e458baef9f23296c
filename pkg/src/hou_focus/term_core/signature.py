from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ParseError, TypeMismatch
from .logic import CONNECTIVES, is_family
from .terms import Const, FreeVar, Term, map_types
from .types import Type, base_names, fresh_tyvar

RESERVED = {"lam", "set"}


@dataclass
class Signature:
    """Declared base types, constants, meta (free) variables and named terms."""

    base_types: set[str] = field(default_factory=lambda: {"e", "t"})
    consts: dict[str, Type] = field(default_factory=lambda: dict(CONNECTIVES))
    metas: dict[str, Type] = field(default_factory=dict)
    lets: dict[str, Term] = field(default_factory=dict)

    def _check_fresh(self, name):
        if name in RESERVED or is_family(name):
            raise ParseError(f"{name!r} is reserved")
        if name in self.consts or name in self.metas or name in self.lets:
            raise ParseError(f"{name!r} is already declared")

    def _check_bases(self, ty):
        missing = base_names(ty) - self.base_types
        if missing:
            raise TypeMismatch(f"undeclared base type(s): {', '.join(sorted(missing))}")

    def declare_base(self, name: str) -> None:
        if name in self.base_types:
            raise ParseError(f"base type {name!r} already declared")
        self.base_types.add(name)

    def declare_const(self, name: str, ty: Type) -> Const:
        self._check_fresh(name)
        self._check_bases(ty)
        self.consts[name] = ty
        return Const(name, ty)

    def declare_meta(self, name: str, ty: Type | None = None) -> FreeVar:
        """Declare a free variable; ``ty=None`` leaves its type unknown."""
        self._check_fresh(name)
        if ty is None:
            ty = fresh_tyvar()
        self._check_bases(ty)
        self.metas[name] = ty
        return FreeVar(name, ty)

    def define(self, name: str, term: Term) -> None:
        self._check_fresh(name)
        self.lets[name] = term

    def const(self, name: str) -> Const:
        return Const(name, self.consts[name])

    def meta(self, name: str) -> FreeVar:
        return FreeVar(name, self.metas[name])

    def check_type_names(self, t: Term) -> None:
        seen = set()
        map_types(t, lambda ty: seen.update(base_names(ty)) or ty)
        missing = seen - self.base_types
        if missing:
            raise TypeMismatch(f"undeclared base type(s): {', '.join(sorted(missing))}")

    @classmethod
    def with_consts(cls, **decls: Type) -> "Signature":
        sig = cls()
        for name, ty in decls.items():
            sig.declare_const(name, ty)
        return sig

