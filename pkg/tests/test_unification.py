import random

import pytest
from hypothesis import given, settings, strategies as st

from hou_focus.errors import LimitExceeded, PreconditionViolated, TypeMismatch
from hou_focus.oracle import brute_force_matchers
from hou_focus.term_core import E, T, Const, FreeVar, Signature, apply, arrows, format_term, parse_term
from hou_focus.term_core.types import fresh_tyvar
from hou_focus.unification import (NameSupply, Problem, SearchLimits, Simplified, check_order, ho_match,
                                   match_bindings, observe, pre_unify, simplify, verify)
from termgen import MATCH_CONSTS, random_match_problem

GD = FreeVar("Gd", arrows(E, E, T))


def ground(P, sem, focus="m", gd=GD):
    return Problem([(apply(gd, P(focus)), P(sem))])


def printed(solutions, name):
    return [format_term(s[name]) for s in solutions]


# -- simplify --------------------------------------------------------------

def test_simplify_identical_pair(P):
    t = P("lam x:e. l(x,m)")
    assert simplify(Problem([(t, t)])) == Simplified([], [])


def test_simplify_rigid_clash(P):
    assert simplify(Problem([(P("lam x:e. l(x,m)"), P("lam x:e. l(x,j)"))])) is None


def test_simplify_orients_flex_rigid(P):
    p = ground(P, "lam x:e. l(x,m)")
    out = simplify(p)
    assert len(out.flex_rigid) == 1 and not out.flex_flex
    flex, rigid = out.flex_rigid[0]
    assert format_term(rigid) == "lam y:e. l(y,m)"
    # the flex side comes first even when written on the right
    swapped = simplify(Problem([(P("lam x:e. l(x,m)"), apply(GD, P("m")))]))
    assert swapped.flex_rigid == out.flex_rigid


def test_simplify_keeps_flex_flex():
    x, y = FreeVar("X", E), FreeVar("Y", E)
    assert simplify(Problem([(x, y)])) == Simplified([], [(x, y)])


# -- match_bindings --------------------------------------------------------

def test_imitation_binding_shape():
    f = FreeVar("F", arrows(E, T))
    l = Const("l", arrows(E, E, T))
    (imitation,) = match_bindings(f, l, NameSupply(prefix="H"))
    assert format_term(imitation["F"]) == "lam y:e. l(H1(y),H2(y))"


def test_first_order_head_gives_imitation_and_projection():
    f = FreeVar("F", arrows(E, E))
    out = match_bindings(f, Const("j", E))
    assert [format_term(b["F"]) for b in out] == ["lam y:e. j", "lam y:e. y"]


def test_no_projection_without_arguments():
    f = FreeVar("F", T)
    out = match_bindings(f, Const("l", arrows(E, E, T)))
    assert len(out) == 1


# -- pre_unify / ho_match --------------------------------------------------

def test_ground_equation_has_two_unifiers(P):
    sols = pre_unify(ground(P, "lam x:e. l(x,m)"))
    assert sorted(format_term(s.substitution["Gd"]) for s in sols) == [
        "lam y:e. lam x:e. l(x,m)", "lam y:e. lam x:e. l(x,y)"]
    assert all(not s.residual_flex_flex for s in sols)


def test_first_order_variable():
    f = FreeVar("F", E)
    sols = pre_unify(Problem([(f, Const("j", E))]))
    assert [format_term(s.substitution["F"]) for s in sols] == ["j"]


def test_four_matchers_for_duplicated_argument():
    sig = Signature.with_consts(f=arrows(E, E, E), a=E)
    sig.declare_meta("G", arrows(E, E))
    p = Problem([(parse_term("G(a)", sig), parse_term("f(a,a)", sig))])
    got = sorted(printed(ho_match(p), "G"))
    assert got == sorted(["lam y:e. f(y,y)", "lam y:e. f(a,y)", "lam y:e. f(y,a)", "lam y:e. f(a,a)"])


def test_letters_matcher(P):
    p = ground(P, "lam x:e. read(x,letters(s,p))", focus="p")
    assert "lam y:e. lam x:e. read(x,letters(s,y))" in printed(ho_match(p), "Gd")


def test_vacuous_matcher_only(P):
    sols = ho_match(ground(P, "lam x:e. l(x,j)"))
    assert printed(sols, "Gd") == ["lam y:e. lam x:e. l(x,j)"]


def test_ho_match_rejects_free_right_side(P):
    with pytest.raises(PreconditionViolated):
        ho_match(Problem([(FreeVar("X", E), FreeVar("Y", E))]))


def test_tyvar_problem_is_rejected():
    with pytest.raises(PreconditionViolated):
        pre_unify(Problem([(FreeVar("X", fresh_tyvar()), Const("j", E))]))


def test_sides_of_different_type_are_rejected(P):
    with pytest.raises(TypeMismatch):
        pre_unify(Problem([(FreeVar("X", E), P("lam x:e. l(x,m)"))]))


def test_node_budget_is_reported(P):
    p = ground(P, "lam x:e. read(x,letters(s,p))", focus="p")
    with pytest.raises(LimitExceeded):
        ho_match(p, SearchLimits(max_nodes=2))


def test_depth_cut_without_solutions_is_a_limit():
    # X(a) == f(f(f(a))) needs four nested bindings
    sig = Signature.with_consts(f=arrows(E, E), a=E)
    sig.declare_meta("X", arrows(E, E))
    p = Problem([(parse_term("X(a)", sig), parse_term("f(f(f(a)))", sig))])
    with pytest.raises(LimitExceeded):
        ho_match(p, SearchLimits(max_depth=2))
    assert sorted(printed(ho_match(p, SearchLimits(max_depth=4)), "X")) == [
        "lam y:e. f(f(f(a)))", "lam y:e. f(f(f(y)))"]


def test_failure_is_not_a_limit(P):
    assert ho_match(Problem([(FreeVar("X", E), P("m")), (FreeVar("X", E), P("j"))])) == []


def test_max_solutions_caps_output():
    sig = Signature.with_consts(f=arrows(E, E, E), a=E)
    sig.declare_meta("G", arrows(E, E))
    p = Problem([(parse_term("G(a)", sig), parse_term("f(a,a)", sig))])
    assert len(ho_match(p, SearchLimits(max_solutions=2))) == 2


@pytest.mark.parametrize("field", ["max_depth", "max_solutions", "max_nodes"])
def test_limits_must_be_positive(field):
    with pytest.raises(ValueError):
        SearchLimits(**{field: 0})


def test_observe_records_every_search(P):
    with observe() as log:
        ho_match(ground(P, "lam x:e. l(x,m)"))
    assert len(log) == 1 and len(log[0][1]) == 2
    ho_match(ground(P, "lam x:e. l(x,m)"))
    assert len(log) == 1


# -- check_order / verify --------------------------------------------------

def test_check_order(P):
    assert check_order(ground(P, "lam x:e. l(x,m)")) == 2
    an = FreeVar("An", arrows(E, T))
    assert check_order(Problem([(apply(an, Const("p", E)), Const("q", T))])) == 2
    h = FreeVar("H", arrows(arrows(E, T), T))
    assert check_order(Problem([(h, h)])) == 3


def test_verify(P):
    p = ground(P, "lam x:e. l(x,m)")
    assert verify({"Gd": P("lam y:e. lam x:e. l(x,y)")}, p)
    assert not verify({"Gd": P("lam y:e. lam x:e. l(x,j)")}, p)
    assert verify({}, Problem([(P("m"), P("m"))]))


# -- properties ------------------------------------------------------------

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_matchers_are_sound(seed):
    lhs, rhs = random_match_problem(random.Random(seed))
    p = Problem([(lhs, rhs)])
    for sigma in ho_match(p, SearchLimits(max_depth=4)):
        assert verify(sigma, p)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_bounded_completeness(seed):
    lhs, rhs = random_match_problem(random.Random(seed))
    p = Problem([(lhs, rhs)])
    found = {format_term(s["G"]) for s in ho_match(p, SearchLimits(max_depth=4))}
    brute = {format_term(s["G"]) for s in brute_force_matchers(p, 3, MATCH_CONSTS)}
    assert brute <= found


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_search_is_deterministic(seed):
    lhs, rhs = random_match_problem(random.Random(seed))
    p = Problem([(lhs, rhs)])
    assert ho_match(p) == ho_match(p)
