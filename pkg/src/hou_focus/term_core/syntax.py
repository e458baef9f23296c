"""Concrete syntax: tokenizer, type/term parser and printer.

    term ::= ident ['!'] | term '(' term {',' term} ')'
           | 'lam' ident ':' type '.' term | '(' term ')'
    type ::= ident | 'set' '(' type ')' | '(' type ')' | type '>' type

``>`` associates to the right and ``#`` starts a comment.  A ``!`` after a
constant marks that occurrence as primary.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError, TypeMismatch, UnknownIdentifier
from .logic import is_family, instance_type
from .signature import Signature
from .terms import Abs, App, Bound, Const, FreeVar, Term, infer_type, iter_atoms, map_types, spine
from .types import Arrow, Base, SetOf, Type, TyVar, fresh_tyvar, resolve, unify_types

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<num>\d+)
  | (?P<punct>==|[(),.:>!?=])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self, offset=0) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.i += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind != "eof" and tok.value == value

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> Token:
        tok = self.next()
        if tok.value != value or tok.kind == "eof":
            raise ParseError(f"expected {value!r}, found {tok.value or 'end of input'!r}", tok.pos, self.text)
        return tok

    def ident(self) -> Token:
        tok = self.next()
        if tok.kind != "ident":
            raise ParseError(f"expected an identifier, found {tok.value or 'end of input'!r}", tok.pos, self.text)
        return tok

    def at_end(self) -> bool:
        return self.peek().kind == "eof"

    def error(self, message) -> ParseError:
        return ParseError(message, self.peek().pos, self.text)


# -- types -----------------------------------------------------------------

def _type_atom(ts: TokenStream, sig: Signature | None) -> Type:
    if ts.accept("("):
        ty = _type(ts, sig)
        ts.expect(")")
        return ty
    tok = ts.ident()
    if tok.value == "set":
        ts.expect("(")
        ty = _type(ts, sig)
        ts.expect(")")
        return SetOf(ty)
    if sig is not None and tok.value not in sig.base_types:
        raise UnknownIdentifier(f"unknown base type {tok.value!r}", tok.pos, ts.text)
    return Base(tok.value)


def _type(ts: TokenStream, sig: Signature | None) -> Type:
    dom = _type_atom(ts, sig)
    if ts.accept(">"):
        return Arrow(dom, _type(ts, sig))
    return dom


def parse_type_tokens(ts: TokenStream, sig: Signature | None = None) -> Type:
    return _type(ts, sig)


def parse_type(text: str, sig: Signature | None = None) -> Type:
    ts = TokenStream(text)
    ty = _type(ts, sig)
    if not ts.at_end():
        raise ts.error("trailing input after type")
    return ty


# -- terms: raw syntax first, then typed elaboration -----------------------

@dataclass
class _RVar:
    name: str
    pos: int
    primary: bool = False


@dataclass
class _RLam:
    name: str
    type: Type
    body: object
    pos: int


@dataclass
class _RApp:
    fn: object
    args: list
    pos: int


def _raw_atom(ts, sig):
    tok = ts.peek()
    if ts.accept("("):
        inner = _raw_term(ts, sig)
        ts.expect(")")
        return inner
    if tok.kind == "ident" and tok.value == "lam":
        ts.next()
        name = ts.ident()
        if name.value == "lam":
            raise ParseError("'lam' cannot be a variable name", name.pos, ts.text)
        ts.expect(":")
        ty = _type(ts, sig)
        ts.expect(".")
        return _RLam(name.value, ty, _raw_term(ts, sig), tok.pos)
    if tok.kind == "ident":
        ts.next()
        return _RVar(tok.value, tok.pos, ts.accept("!"))
    raise ParseError(f"expected a term, found {tok.value or 'end of input'!r}", tok.pos, ts.text)


def _raw_term(ts, sig):
    bare_lam = ts.at("lam")
    term = _raw_atom(ts, sig)
    while not bare_lam and ts.at("("):
        pos = ts.next().pos
        args = [_raw_term(ts, sig)]
        while ts.accept(","):
            args.append(_raw_term(ts, sig))
        ts.expect(")")
        term = _RApp(term, args, pos)
    return term


class _Elaborator:
    def __init__(self, sig: Signature, text: str):
        self.sig = sig
        self.text = text
        self.tsubst: dict[int, Type] = {}

    def fail(self, exc, message, pos):
        if exc is TypeMismatch:
            return TypeMismatch(f"{message} (at offset {pos})")
        return exc(message, pos, self.text)

    def var(self, r: _RVar, scope):
        for i, (name, ty) in enumerate(scope):
            if name == r.name:
                if r.primary:
                    raise self.fail(ParseError, "only constants can be marked primary", r.pos)
                return Bound(i), ty
        sig = self.sig
        if r.name in sig.lets:
            term = sig.lets[r.name]
            return term, infer_type(term)
        if r.name in sig.consts:
            return Const(r.name, sig.consts[r.name], r.primary), sig.consts[r.name]
        if r.primary:
            raise self.fail(ParseError, "only constants can be marked primary", r.pos)
        if r.name in sig.metas:
            return FreeVar(r.name, sig.metas[r.name]), sig.metas[r.name]
        if is_family(r.name):
            raise self.fail(ParseError, f"{r.name!r} must be applied so its type can be inferred", r.pos)
        raise self.fail(UnknownIdentifier, f"unknown identifier {r.name!r}", r.pos)

    def apply(self, fn, fty, arg, aty, pos):
        fty = resolve(fty, self.tsubst)
        if isinstance(fty, TyVar):
            res = fresh_tyvar()
            unify_types(fty, Arrow(aty, res), self.tsubst)
            return App(fn, arg), res
        if not isinstance(fty, Arrow):
            raise self.fail(TypeMismatch, f"cannot apply a term of type {fty}", pos)
        try:
            unify_types(fty.dom, aty, self.tsubst)
        except TypeMismatch:
            raise self.fail(TypeMismatch, f"argument of type {resolve(aty, self.tsubst)} where "
                                          f"{resolve(fty.dom, self.tsubst)} is expected", pos) from None
        return App(fn, arg), fty.cod

    def term(self, r, scope):
        if isinstance(r, _RVar):
            return self.var(r, scope)
        if isinstance(r, _RLam):
            self.sig._check_bases(r.type)
            body, bty = self.term(r.body, [(r.name, r.type)] + scope)
            return Abs(r.name, r.type, body), Arrow(r.type, bty)
        head = r.fn
        args = [self.term(a, scope) for a in r.args]
        if isinstance(head, _RVar) and is_family(head.name) and not any(n == head.name for n, _ in scope) \
                and head.name not in self.sig.lets:
            try:
                ity = instance_type(head.name, args[0][1], self.tsubst)
            except TypeMismatch as exc:
                raise self.fail(TypeMismatch, str(exc), head.pos) from None
            fn, fty = Const(head.name, ity), ity
        else:
            fn, fty = self.term(head, scope)
        for arg, aty in args:
            fn, fty = self.apply(fn, fty, arg, aty, r.pos)
        return fn, fty


def parse_term_tokens(ts: TokenStream, sig: Signature) -> Term:
    """Parse one term from ``ts``, leaving following tokens unconsumed."""
    raw = _raw_term(ts, sig)
    el = _Elaborator(sig, ts.text)
    term, _ = el.term(raw, [])
    return map_types(term, lambda ty: resolve(ty, el.tsubst))


def parse_term(text: str, sig: Signature | None = None) -> Term:
    if sig is None:
        sig = Signature()
    ts = TokenStream(text)
    term = parse_term_tokens(ts, sig)
    if not ts.at_end():
        raise ts.error(f"unexpected {ts.peek().value!r} after term")
    return term


# -- printing --------------------------------------------------------------

_NAMES = ("y", "x", "z", "u", "v", "w")


def _binder_name(depth: int, taken: set[str]) -> str:
    name = _NAMES[depth % len(_NAMES)]
    if depth >= len(_NAMES):
        name += str(depth // len(_NAMES))
    while name in taken or name == "lam" or name == "set" or is_family(name):
        name += "'"
    return name


def format_type(ty: Type) -> str:
    return str(ty)


def format_term(t: Term, avoid=()) -> str:
    """Render ``t`` in the concrete syntax with binder names chosen by depth
    (y, x, z, u, ...), skipping names of constants and variables in ``t``."""
    taken = set(avoid) | {a.name for a in iter_atoms(t) if isinstance(a, (Const, FreeVar))}
    return _fmt(t, [], taken)


def _fmt(t: Term, names: list[str], taken) -> str:
    if isinstance(t, (Const, FreeVar)):
        return t.name
    if isinstance(t, Bound):
        return names[len(names) - 1 - t.index]
    if isinstance(t, Abs):
        name = _binder_name(len(names), taken)
        return f"lam {name}:{t.type}. {_fmt(t.body, names + [name], taken)}"
    head, args = spine(t)
    h = _fmt(head, names, taken)
    if isinstance(head, Abs):
        h = f"({h})"
    return f"{h}({','.join(_fmt(a, names, taken) for a in args)})"
