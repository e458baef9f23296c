"""Exhaustive generation of small closed terms, used to check the solver."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Mapping

from .term_core.signature import Signature
from .term_core.terms import Abs, Bound, Const, Term, apply
from .term_core.types import Type, split_arrow
from .unification import Problem, verify


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _const_table(sig) -> tuple[tuple[str, Type], ...]:
    if isinstance(sig, Signature):
        return tuple(sig.consts.items())
    if isinstance(sig, Mapping):
        return tuple(sig.items())
    return tuple(sig)


def enumerate_ground_terms(ty: Type, size_k: int, sig) -> list[Term]:
    """All eta-long beta-normal closed terms of type ``ty`` with at most
    ``size_k`` constant/variable occurrences, smallest first.

    ``sig`` is a Signature, a mapping from constant names to types, or a
    sequence of such pairs.
    """
    consts = _const_table(sig)

    @lru_cache(maxsize=None)
    def terms(ty, ctx, n):
        args, base = split_arrow(ty)
        inner = tuple(reversed(args)) + ctx
        out = []
        for body in bodies(base, inner, n):
            for a in reversed(args):
                body = Abs("u", a, body)
            out.append(body)
        return tuple(out)

    @lru_cache(maxsize=None)
    def bodies(base, ctx, n):
        heads = [(Bound(i), ctx[i]) for i in reversed(range(len(ctx)))]
        heads += [(Const(name, cty), cty) for name, cty in consts]
        out = []
        for head, hty in heads:
            hargs, res = split_arrow(hty)
            if res != base:
                continue
            for sizes in _compositions(n - 1, len(hargs)):
                choices = [terms(aty, ctx, s) for aty, s in zip(hargs, sizes)]
                for combo in itertools.product(*choices):
                    out.append(apply(head, *combo))
        return tuple(out)

    seen, result = set(), []
    for n in range(1, size_k + 1):
        for t in terms(ty, (), n):
            if t not in seen:
                seen.add(t)
                result.append(t)
    return result


def brute_force_matchers(p: Problem, size_k: int, sig) -> list[dict[str, Term]]:
    """Every ground substitution built from terms of size at most ``size_k``
    that solves ``p``."""
    fvs = sorted(p.free_var_types().items())
    pools = [enumerate_ground_terms(ty, size_k, sig) for _, ty in fvs]
    out = []
    for combo in itertools.product(*pools):
        sigma = {name: t for (name, _), t in zip(fvs, combo)}
        if verify(sigma, p):
            out.append(sigma)
    return out
