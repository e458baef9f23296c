"""Huet-style pre-unification and higher-order matching.

The search alternates SIMPL (decompose rigid-rigid pairs, classify the rest)
with MATCH (imitation/projection bindings for the first flex-rigid pair).
It is run as an iterative deepening over the binding depth: the problem's
own variables sit at level 0 and every variable introduced by a binding for
a level-``d`` variable sits at level ``d + 1``; ``max_depth`` bounds that
level.  Solutions are reported in the order they are first reached.
"""

from __future__ import annotations

import contextlib
import itertools
from dataclasses import dataclass, field

from .errors import LimitExceeded, PreconditionViolated, TypeMismatch
from .term_core.terms import (Abs, Bound, Const, FreeVar, Term, apply, apply_subst, compose,
                              const_names, free_var_types, free_vars, infer_type, normalize, spine,
                              strip_abs, term_has_tyvar, wrap_abs, _subst_free)
from .term_core.types import Type, arrows, order_of_type, split_arrow


@dataclass
class Problem:
    pairs: list[tuple[Term, Term]]
    sig: object = None

    def __post_init__(self):
        self.pairs = [tuple(p) for p in self.pairs]

    def free_var_types(self) -> dict[str, Type]:
        out = {}
        for l, r in self.pairs:
            out.update(free_var_types(l))
            out.update(free_var_types(r))
        return out

    def normalized(self) -> "Problem":
        return Problem([(normalize(l), normalize(r)) for l, r in self.pairs], self.sig)


@dataclass(frozen=True)
class SearchLimits:
    max_depth: int = 8
    max_solutions: int = 50
    max_nodes: int = 100_000

    def __post_init__(self):
        for name in ("max_depth", "max_solutions", "max_nodes"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class Solution:
    substitution: dict[str, Term]
    residual_flex_flex: list[tuple[Term, Term]] = field(default_factory=list)


@dataclass
class Simplified:
    flex_rigid: list[tuple[Term, Term]]
    flex_flex: list[tuple[Term, Term]]


def _head(t: Term) -> Term:
    return spine(strip_abs(t)[1])[0]


def is_flex(t: Term) -> bool:
    return isinstance(_head(t), FreeVar)


def simplify_pairs(pairs) -> Simplified | None:
    """SIMPL on normalized pairs; ``None`` signals failure."""
    flex_rigid, flex_flex = [], []
    stack = list(reversed(pairs))
    while stack:
        l, r = stack.pop()
        if l == r:
            continue
        lb, lbody = strip_abs(l)
        rb, rbody = strip_abs(r)
        if len(lb) != len(rb):
            raise TypeMismatch(f"pair sides are not eta-long terms of one type: {l!r} / {r!r}")
        lh, largs = spine(lbody)
        rh, rargs = spine(rbody)
        lflex, rflex = isinstance(lh, FreeVar), isinstance(rh, FreeVar)
        if lflex and rflex:
            flex_flex.append((l, r))
        elif lflex:
            flex_rigid.append((l, r))
        elif rflex:
            flex_rigid.append((r, l))
        else:
            if lh != rh or len(largs) != len(rargs):
                return None
            for a, b in reversed(list(zip(largs, rargs))):
                stack.append((wrap_abs(lb, a), wrap_abs(lb, b)))
    return Simplified(flex_rigid, flex_flex)


def simplify(p: Problem) -> Simplified | None:
    return simplify_pairs(p.normalized().pairs)


class NameSupply:
    """Deterministic fresh variable names avoiding a fixed set."""

    def __init__(self, taken=(), prefix="H"):
        self.taken = set(taken)
        self.prefix = prefix
        self.counter = itertools.count(1)

    def fresh(self) -> str:
        while True:
            name = f"{self.prefix}{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def match_bindings(flex: FreeVar, rigid_head: Term, names: NameSupply | None = None) -> list[dict[str, Term]]:
    """Imitation (for a constant head) followed by projections, in argument
    order.  Each binding's inner heads are fresh variables."""
    if names is None:
        names = NameSupply(prefix="H")
    arg_tys, base = split_arrow(flex.type)
    m = len(arg_tys)
    params = [Bound(m - 1 - i) for i in range(m)]

    def partial_binding(head: Term, head_ty: Type) -> Term:
        args = []
        for ty in split_arrow(head_ty)[0]:
            h = FreeVar(names.fresh(), arrows(*arg_tys, ty))
            args.append(apply(h, *params))
        body = apply(head, *args)
        for ty in reversed(arg_tys):
            body = Abs("u", ty, body)
        return normalize(body)

    out = []
    if isinstance(rigid_head, Const):
        out.append({flex.name: partial_binding(rigid_head, rigid_head.type)})
    for j, ty in enumerate(arg_tys):
        if split_arrow(ty)[1] == base:
            out.append({flex.name: partial_binding(params[j], ty)})
    return out


class _Search:
    def __init__(self, problem: Problem, lim: SearchLimits):
        self.lim = lim
        self.originals = problem.free_var_types()
        taken = set(self.originals)
        for l, r in problem.pairs:
            taken |= const_names(l) | const_names(r)
        self.taken = taken
        self.nodes = 0
        self.cut = False
        self.names = NameSupply(taken)

    def run(self, pairs, sigma, levels, used, bound):
        simp = simplify_pairs(pairs)
        if simp is None:
            return
        if not simp.flex_rigid:
            if used == bound:
                yield sigma, simp.flex_flex
            return
        l, r = simp.flex_rigid[0]
        flex, rigid = _head(l), _head(r)
        level = levels[flex.name] + 1
        if level > bound:
            self.cut = True
            return
        rest = simp.flex_rigid + simp.flex_flex
        for binding in match_bindings(flex, rigid, self.names):
            self.nodes += 1
            if self.nodes > self.lim.max_nodes:
                raise LimitExceeded(f"node budget of {self.lim.max_nodes} exhausted")
            new_levels = dict(levels)
            for name in free_vars(binding[flex.name]):
                new_levels.setdefault(name, level)
            new_pairs = [(normalize(_subst_free(a, binding)), normalize(_subst_free(b, binding)))
                         for a, b in rest]
            yield from self.run(new_pairs, compose(sigma, binding), new_levels, max(used, level), bound)


def _check_problem(p: Problem) -> Problem:
    for l, r in p.pairs:
        if term_has_tyvar(l) or term_has_tyvar(r):
            raise PreconditionViolated("problem contains type variables; delay it until its types are known")
        lt, rt = infer_type(l), infer_type(r)
        if lt != rt:
            raise TypeMismatch(f"pair sides have different types {lt} and {rt}")
    return p.normalized()


_observers: list[list] = []


@contextlib.contextmanager
def observe():
    """Collect ``(problem, solutions)`` for every search finished inside the
    block, including searches started by the focus and SOE layers."""
    log: list = []
    _observers.append(log)
    try:
        yield log
    finally:
        _observers.remove(log)


def pre_unify(p: Problem, lim: SearchLimits | None = None) -> list[Solution]:
    found = _pre_unify(p, lim)
    for log in _observers:
        log.append((p, found))
    return found


def _pre_unify(p: Problem, lim: SearchLimits | None) -> list[Solution]:
    lim = lim or SearchLimits()
    p = _check_problem(p)
    search = _Search(p, lim)
    levels = {name: 0 for name in search.originals}
    found, seen = [], set()
    for bound in range(0, lim.max_depth + 1):
        search.cut = False
        search.names = NameSupply(search.taken)
        try:
            for sigma, residual in search.run(p.pairs, {}, levels, 0, bound):
                subst = {k: v for k, v in sigma.items() if k in search.originals}
                key = (tuple(sorted(subst.items(), key=lambda kv: kv[0])), tuple(residual))
                if key in seen:
                    continue
                seen.add(key)
                found.append(Solution(subst, list(residual)))
                if len(found) >= lim.max_solutions:
                    return found
        except LimitExceeded as exc:
            exc.solutions = found
            raise
        if not search.cut:
            return found
    if not found:
        raise LimitExceeded(f"no solution within depth {lim.max_depth}")
    return found


def ho_match(p: Problem, lim: SearchLimits | None = None) -> list[dict[str, Term]]:
    """Matching: free variables may occur on the left-hand sides only."""
    for _, r in p.pairs:
        if free_vars(r):
            raise PreconditionViolated(f"right-hand side has free variables {sorted(free_vars(r))}")
    return [s.substitution for s in pre_unify(p, lim)]


def check_order(p: Problem) -> int:
    return max((order_of_type(ty) for ty in p.free_var_types().values()), default=0)


def verify(sigma, p: Problem) -> bool:
    for l, r in p.pairs:
        if normalize(apply_subst(sigma, l)) != normalize(apply_subst(sigma, r)):
            return False
    return True


__all__ = [
    "NameSupply", "Problem", "SearchLimits", "Simplified", "Solution", "check_order", "ho_match",
    "is_flex", "match_bindings", "observe", "pre_unify", "simplify", "simplify_pairs", "verify",
]
