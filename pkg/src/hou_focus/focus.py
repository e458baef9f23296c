"""Focus semantic values computed by higher-order matching.

A ground equation ``Gd(F1)...(Fn) = Sem`` is solved for ``Gd``; the focus
semantic value is then the set of all ``Gd(t1)...(tn)``, kept intensionally
as the pair ``(gd, n)``.  Occurrences of the foci in ``Sem`` that come from
the focused material are *primary*, and solutions that keep a primary
occurrence are discarded (see ``por_filter``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import FocusError, LimitExceeded, NoSolution, TypeMismatch
from .term_core.logic import also_formula, only_formula
from .term_core.terms import (Abs, Bound, Const, FreeVar, Term, apply, const_names, free_vars,
                              infer_type, iter_atoms, loose_bound, normalize, positions, replace_at,
                              subterm_at)
from .term_core.types import Arrow, Type, arrows, split_arrow
from .unification import NameSupply, Problem, SearchLimits, ho_match


class PorMode(str, enum.Enum):
    DSP = "dsp"
    STRICT = "strict"
    OFF = "off"


@dataclass(frozen=True)
class GroundEquation:
    sem: Term
    foci: tuple[Term, ...]
    gd_var: FreeVar
    # (path in sem, index of the focus found there)
    primary_positions: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def lhs(self) -> Term:
        return apply(self.gd_var, *self.foci)

    def problem(self) -> Problem:
        return Problem([(self.lhs, self.sem)])


@dataclass(frozen=True)
class Fsv:
    gd: Term
    arity: int
    argument_types: tuple[Type, ...]

    @property
    def gd_type(self) -> Type:
        return infer_type(self.gd)

    @property
    def element_type(self) -> Type:
        return split_arrow(self.gd_type, self.arity)[1]


def _closed(t: Term) -> bool:
    return not free_vars(t) and not loose_bound(t)


def _fresh_name(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    return NameSupply(taken, prefix=base).fresh()


def _has_primary(t: Term) -> bool:
    return any(isinstance(a, Const) and a.primary for a in iter_atoms(t))


def _focus_positions(sem: Term, focus: Term) -> list[tuple[int, ...]]:
    found = [path for path, sub in positions(sem) if sub == focus]
    flagged = [p for p in found if _has_primary(subterm_at(sem, p))]
    return flagged or found


def build_ground_equation(sem: Term, foci, sig=None, name: str = "Gd") -> GroundEquation:
    """Set up ``name(F1)...(Fn) = sem``.

    Occurrences of a focus carrying a ``primary`` mark become the primary
    positions; when a focus has no marked occurrence, all of its occurrences
    are primary.
    """
    if not _closed(sem):
        raise FocusError("the semantics of a ground equation must be closed")
    sem = normalize(sem)
    foci = tuple(normalize(f) for f in foci)
    alpha = infer_type(sem, sig)
    betas = []
    primary = []
    for i, focus in enumerate(foci):
        if not _closed(focus):
            raise FocusError("focus terms must be closed")
        betas.append(infer_type(focus, sig))
        where = _focus_positions(sem, focus)
        if not where:
            raise FocusError(f"focus #{i + 1} does not occur in the semantics")
        primary.extend((p, i) for p in where)
    taken = const_names(sem) | set().union(*(const_names(f) for f in foci))
    gd_var = FreeVar(_fresh_name(name, taken), arrows(*betas, alpha))
    return GroundEquation(sem, foci, gd_var, tuple(primary))


def por_filter(candidates, geq: GroundEquation, mode: PorMode | str = PorMode.DSP):
    """Keep the candidates that abstract every primary occurrence.

    Each candidate value ``g`` of the ground variable is applied to fresh
    constants ``c1..cn``.  ``dsp`` requires ``ci`` at every primary position
    of the normal form; ``strict`` also requires that nothing else changed.
    """
    mode = PorMode(mode)
    if mode is PorMode.OFF:
        return list(candidates)
    probes = [Const(f"#focus{i}", infer_type(f)) for i, f in enumerate(geq.foci)]
    expected = [normalize(c) for c in probes]
    strict_target = geq.sem
    for path, i in geq.primary_positions:
        strict_target = replace_at(strict_target, path, expected[i])
    kept = []
    for cand in candidates:
        probe = normalize(apply(cand[geq.gd_var.name], *probes))
        if not all(subterm_at(probe, path) == expected[i] for path, i in geq.primary_positions):
            continue
        if mode is PorMode.STRICT and probe != strict_target:
            continue
        kept.append(cand)
    return kept


def ground_candidates(geq: GroundEquation, lim: SearchLimits | None = None) -> list[dict]:
    """All matchers of the ground equation, before any filtering."""
    return ho_match(geq.problem(), lim)


def solve_fsv(geq: GroundEquation, lim: SearchLimits | None = None,
              mode: PorMode | str = PorMode.DSP) -> list[Fsv]:
    kept = por_filter(ground_candidates(geq, lim), geq, mode)
    if not kept:
        raise NoSolution("no admissible value for the ground variable")
    betas = tuple(infer_type(f) for f in geq.foci)
    return [Fsv(c[geq.gd_var.name], len(geq.foci), betas) for c in kept]


def fsv_member(fsv: Fsv, candidate: Term, lim: SearchLimits | None = None) -> list[Term] | None:
    """Witnesses ``t1..tn`` with ``gd(t1..tn) = candidate``, or None."""
    cty = infer_type(candidate)
    if cty != fsv.element_type:
        raise TypeMismatch(f"candidate has type {cty}, the focus value holds {fsv.element_type}")
    taken = const_names(fsv.gd) | const_names(candidate) | free_vars(candidate)
    names = NameSupply(taken, prefix="X")
    xs = [FreeVar(names.fresh(), ty) for ty in fsv.argument_types]
    try:
        sols = ho_match(Problem([(apply(fsv.gd, *xs), candidate)]), lim)
    except LimitExceeded:
        return None
    if not sols:
        return None
    # an argument the value never uses stays a variable: any term will do
    return [sols[0].get(x.name, x) for x in xs]


def _operator(kind: str, np: Term, np_type: Type, vp: Term, vp_type: Type, fsv: Fsv) -> Term:
    if vp_type != fsv.element_type:
        raise TypeMismatch(f"VP of type {vp_type} but the focus value holds {fsv.element_type}")
    if not isinstance(vp_type, Arrow) or vp_type.dom != np_type:
        raise TypeMismatch(f"NP of type {np_type} cannot be the argument of a VP of type {vp_type}")
    build = only_formula if kind == "only" else also_formula
    return build(np, vp, fsv.gd, fsv.arity, vp_type, fsv.gd_type)


def interpret_only(np_sem: Term, vp_sem: Term, fsv: Fsv) -> Term:
    """``forall P. P in FSV and P(NP) -> P = VP``."""
    f = _operator("only", np_sem, infer_type(np_sem), vp_sem, infer_type(vp_sem), fsv)
    return normalize(f)


def interpret_also(np_sem: Term, vp_sem: Term, fsv: Fsv) -> Term:
    """``exists P. P in FSV and P(NP) and P != VP``; the inequality stays an
    object-level ``not(eq(...))`` literal."""
    f = _operator("also", np_sem, infer_type(np_sem), vp_sem, infer_type(vp_sem), fsv)
    return normalize(f)


OPERATORS = ("only", "also")


@dataclass
class ChainStage:
    operator: str
    focus: Term
    equation: GroundEquation
    candidates: list[dict]
    fsv: Fsv
    semantics: Term


@dataclass
class ChainReading:
    formula: Term
    stages: list[ChainStage] = field(default_factory=list)


def analyze_operator_chain(vp_sem: Term, chain, np_sem: Term, lim: SearchLimits | None = None,
                           mode: PorMode | str = PorMode.DSP) -> list[ChainReading]:
    """Apply focus operators innermost first.

    At each stage the ground equation is set up on the current VP meaning
    and the stage's focus; the operator is then abstracted over the subject
    position (``lam z. op(z, VP, FSV)``) to give the next VP meaning.  The
    subject is supplied after the last operator.  One reading is returned
    per combination of admissible focus values.
    """
    for op, _ in chain:
        if op not in OPERATORS:
            raise ValueError(f"unknown focus operator {op!r}")
    readings = []

    def step(sem: Term, remaining, stages):
        if not remaining:
            readings.append(ChainReading(normalize(apply(sem, np_sem)), stages))
            return
        (op, focus), rest = remaining[0], remaining[1:]
        geq = build_ground_equation(sem, [focus])
        cands = ground_candidates(geq, lim)
        kept = por_filter(cands, geq, mode)
        if not kept:
            raise NoSolution(f"no admissible focus value at the {op} stage")
        vp_type = infer_type(sem)
        if not isinstance(vp_type, Arrow):
            raise TypeMismatch(f"focus operators apply to properties, not to {vp_type}")
        for cand in kept:
            fsv = Fsv(cand[geq.gd_var.name], 1, (infer_type(geq.foci[0]),))
            body = _operator(op, Bound(0), vp_type.dom, sem, vp_type, fsv)
            nxt = normalize(Abs("z", vp_type.dom, body))
            stage = ChainStage(op, geq.foci[0], geq, cands, fsv, nxt)
            step(nxt, rest, stages + [stage])

    step(normalize(vp_sem), list(chain), [])
    return readings
