"""Second occurrence expressions.

Source and target clause must share one meaning ``An``::

    An(SP1..SPn) = SSem
    An(TP1..TPn) = TSem        (TSem given as a template over Gd)
    Gd(F1..Fk)   = VP          (VP read off the template)

``Gd`` and the foci ``F`` start without a type, so the equations are solved
by a scheduler that only hands an equation to the matcher once every type
in it is known.  Types become known as solved variables are substituted in
and the rigid skeletons of both sides of each pending equation are aligned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import Deadlock, FocusError, NoSolution, TypeMismatch
from .focus import GroundEquation, PorMode, build_ground_equation, por_filter
from .term_core.logic import alt_arity
from .term_core.terms import (Abs, Bound, Const, FreeVar, Term, _infer, apply, compose, const_names,
                              free_var_types, free_vars, infer_type, loose_bound, map_types, normalize,
                              positions, spine, strip_abs, term_has_tyvar, _subst_free)
from .term_core.types import Type, fresh_tyvar, resolve, unify_types
from .unification import NameSupply, Problem, SearchLimits, ho_match, pre_unify


@dataclass
class SoeProblem:
    source_sem: Term
    parallel_pairs: list[tuple[Term, Term]]
    target_template: Term
    an_name: str = "An"


@dataclass
class SoeEquation:
    label: str
    lhs: Term
    rhs: Term
    ground: GroundEquation | None = None


@dataclass
class SoeResult:
    an: Term
    gd: Term | None
    foci: list[Term]
    target_sem: Term
    substitution: dict[str, Term] = field(default_factory=dict)
    # values found for the type variables of the equations
    type_subst: dict[int, Type] = field(default_factory=dict)

    def instantiate(self, t: Term) -> Term:
        """``t`` with this result's terms and types substituted, normalized."""
        return _instantiate(t, self.substitution, self.type_subst)


def find_gd(template: Term) -> tuple[FreeVar, int] | None:
    """The variable ``G`` of the first ``alt<n>(G)`` literal in ``template``."""
    for _, sub in positions(template):
        head, args = spine(sub)
        if isinstance(head, Const) and alt_arity(head.name) is not None and len(args) == 1:
            # the variable may already be eta-expanded
            arg_head, _ = spine(strip_abs(args[0])[1])
            if isinstance(arg_head, FreeVar):
                return arg_head, alt_arity(head.name)
    return None


def find_vp(template: Term) -> Term | None:
    """Right argument of the first closed ``eq`` literal in ``template``."""
    for _, sub in positions(template):
        head, args = spine(sub)
        if isinstance(head, Const) and head.name == "eq" and len(args) == 2:
            vp = args[1]
            if not loose_bound(vp) and not free_vars(vp):
                return vp
    return None


def build_soe_equations(p: SoeProblem) -> list[SoeEquation]:
    if not p.parallel_pairs:
        raise ValueError("an SOE needs at least one pair of parallel elements")
    sps = [normalize(sp) for sp, _ in p.parallel_pairs]
    tps = [normalize(tp) for _, tp in p.parallel_pairs]
    for sp, tp in zip(sps, tps):
        st, tt = infer_type(sp), infer_type(tp)
        if st != tt:
            raise TypeMismatch(f"parallel elements have types {st} and {tt}")
    try:
        source = build_ground_equation(p.source_sem, sps, name=p.an_name)
    except FocusError as exc:
        raise FocusError(f"source clause: {exc}") from None
    an = source.gd_var
    template = normalize(p.target_template)
    tsubst: dict[int, Type] = {}
    try:
        unify_types(infer_type(template, tsubst=tsubst), infer_type(source.sem), tsubst)
    except TypeMismatch as exc:
        raise TypeMismatch(f"target template does not fit the source clause: {exc}") from None
    template = map_types(template, lambda ty: resolve(ty, tsubst))
    eqs = [
        SoeEquation("source", source.lhs, source.sem, source),
        SoeEquation("target", apply(an, *tps), template),
    ]
    found = find_gd(template)
    if found is not None:
        gd, n = found
        vp = find_vp(template)
        if vp is None:
            raise FocusError("no closed eq(P, VP) literal in the target template")
        taken = const_names(template) | free_vars(template) | {an.name}
        names = NameSupply(taken, prefix="F")
        foci = [FreeVar("F" if n == 1 and "F" not in taken else names.fresh(), fresh_tyvar())
                for _ in range(n)]
        eqs.append(SoeEquation("focus", apply(gd, *foci), vp))
    return eqs


def _align(l: Term, r: Term, ctx: tuple, tsubst: dict) -> None:
    """Unify the types of corresponding subterms along the common rigid
    skeleton of ``l`` and ``r``."""
    unify_types(_infer(l, ctx, tsubst), _infer(r, ctx, tsubst), tsubst)
    if isinstance(l, Abs) and isinstance(r, Abs):
        unify_types(l.type, r.type, tsubst)
        _align(l.body, r.body, (l.type,) + ctx, tsubst)
        return
    lh, la = spine(l)
    rh, ra = spine(r)
    same_head = (isinstance(lh, Const) and isinstance(rh, Const) and lh.name == rh.name) or \
        (isinstance(lh, Bound) and lh == rh)
    if same_head and len(la) == len(ra):
        for a, b in zip(la, ra):
            _align(a, b, ctx, tsubst)


@dataclass
class _State:
    lim: SearchLimits
    mode: PorMode
    trace: list | None
    results: list = field(default_factory=list)


def _instantiate(t: Term, sigma, tsubst) -> Term:
    t = map_types(_subst_free(t, sigma), lambda ty: resolve(ty, tsubst))
    return normalize(t)


def _solve_equation(l: Term, r: Term, lim) -> list[dict]:
    if free_vars(r) and not free_vars(l):
        l, r = r, l
    if not free_vars(r):
        return ho_match(Problem([(l, r)]), lim)
    return [s.substitution for s in pre_unify(Problem([(l, r)]), lim) if not s.residual_flex_flex]


def schedule_solve(eqs: list[SoeEquation], lim: SearchLimits | None = None,
                   mode: PorMode | str = PorMode.DSP, trace: list | None = None) -> list[SoeResult]:
    """Solve the equations one at a time, always taking the first one whose
    types are fully known.  ``trace`` (if given) receives one entry per
    solved equation: its label and the types of its free variables."""
    state = _State(lim or SearchLimits(), PorMode(mode), trace)
    _schedule(state, eqs, list(eqs), {}, {})
    if not state.results:
        raise NoSolution("the SOE equations have no common solution")
    return state.results


def _schedule(state, all_eqs, pending, sigma, tsubst):
    if len(state.results) >= state.lim.max_solutions:
        return
    current = [(eq, _instantiate(eq.lhs, sigma, tsubst), _instantiate(eq.rhs, sigma, tsubst))
               for eq in pending]
    # propagate types until nothing new is learnt
    while True:
        before = len(tsubst)
        try:
            for _, l, r in current:
                _align(l, r, (), tsubst)
        except TypeMismatch:
            return
        if len(tsubst) == before:
            break
        current = [(eq, _instantiate(eq.lhs, sigma, tsubst), _instantiate(eq.rhs, sigma, tsubst))
                   for eq in pending]
    open_eqs = []
    for eq, l, r in current:
        if free_vars(l) or free_vars(r):
            open_eqs.append((eq, l, r))
        elif l != r:
            return
    if not open_eqs:
        state.results.append(_result(all_eqs, sigma, tsubst))
        return
    ready = next(((eq, l, r) for eq, l, r in open_eqs
                  if not term_has_tyvar(l) and not term_has_tyvar(r)), None)
    if ready is None:
        names = sorted({n for _, l, r in open_eqs for n in free_vars(l) | free_vars(r)})
        raise Deadlock(f"no equation can be typed; unknowns {', '.join(names)}")
    eq, l, r = ready
    candidates = _solve_equation(l, r, state.lim)
    if eq.ground is not None:
        candidates = por_filter(candidates, eq.ground, state.mode)
    if state.trace is not None:
        types = {**free_var_types(l), **free_var_types(r)}
        state.trace.append((eq.label, types, len(candidates)))
    rest = [e for e in pending if e is not eq]
    for cand in candidates:
        _schedule(state, all_eqs, rest, compose(sigma, cand), dict(tsubst))


def _result(all_eqs, sigma, tsubst) -> SoeResult:
    source, target = all_eqs[0], all_eqs[1]
    an_name = spine(source.lhs)[0].name
    an = sigma[an_name]
    gd, foci = None, []
    if len(all_eqs) > 2:
        head, args = spine(all_eqs[2].lhs)
        gd = sigma.get(head.name)
        foci = [sigma.get(a.name, a) for a in args]
    target_sem = _instantiate(target.rhs, sigma, tsubst)
    return SoeResult(an, gd, foci, target_sem, dict(sigma), dict(tsubst))


def resolve_soe(p: SoeProblem, lim: SearchLimits | None = None,
                mode: PorMode | str = PorMode.DSP, trace: list | None = None) -> list[SoeResult]:
    return schedule_solve(build_soe_equations(p), lim, mode, trace)
