import random

import pytest
from hypothesis import given, settings, strategies as st

from hou_focus.errors import ParseError, TypeMismatch, UnknownIdentifier
from hou_focus.term_core import (E, T, Abs, App, Bound, Const, FreeVar, Signature, alpha_equal,
                                 apply, apply_subst, arrows, beta_normal, format_term, free_vars,
                                 infer_type, normalize, parse_term, size)
from hou_focus.term_core.terms import compose, shift
from termgen import SMALL_TYPES, random_term

L = Const("l", arrows(E, E, T))
M = Const("m", E)


def test_parse_abstraction(P):
    t = P("lam x:e. l(x,m)")
    assert t == Abs("x", E, App(App(L, Bound(0)), M))


def test_parse_constant(P):
    assert P("m") == M


def test_curried_call_sugar(P):
    assert P("l(j,m)") == P("l(j)(m)")


@pytest.mark.parametrize("text, error", [
    ("lam x:e. x(x)", TypeMismatch),
    ("m(j)", TypeMismatch),
    ("l(m", ParseError),
    ("lam x e. x", ParseError),
    ("nobody", UnknownIdentifier),
    ("forall", ParseError),
])
def test_parse_errors(P, text, error):
    with pytest.raises(error):
        P(text)


def test_parse_error_carries_position(P):
    with pytest.raises(ParseError) as info:
        P("l(j,,m)")
    assert info.value.pos == 4


@pytest.mark.parametrize("text, ty", [
    ("lam x:e. l(x,m)", arrows(E, T)),
    ("lam y:e. lam x:e. l(x,y)", arrows(E, E, T)),
    ("forall(lam P:e>t. P(j))", T),
    ("alt1(lam y:e. lam x:e. l(x,y))", None),
])
def test_infer_type(P, text, ty):
    got = infer_type(P(text))
    if ty is not None:
        assert got == ty
    else:
        assert str(got) == "set(e>t)"


@pytest.mark.parametrize("text, expected", [
    ("(lam y:e. lam x:e. l(x,y))(m)", "lam x:e. l(x,m)"),
    ("l", "lam y:e. lam x:e. l(y,x)"),
    ("(lam y:e. lam x:e. read(x,letters(s,y)))(p)", "lam x:e. read(x,letters(s,p))"),
    ("lam P:e>t. P(j)", "lam y:e>t. y(j)"),
])
def test_normalize(P, text, expected):
    assert normalize(P(text)) == normalize(P(expected))


def test_eta_long_form_of_a_constant(P):
    assert format_term(normalize(P("l"))) == "lam y:e. lam x:e. l(y,x)"


@pytest.mark.parametrize("a, b, same", [
    ("lam x:e. l(x,m)", "lam z:e. l(z,m)", True),
    ("lam x:e. l(x,m)", "lam x:e. l(x,j)", False),
    ("lam y:e. lam x:e. l(x,y)", "lam x:e. lam y:e. l(y,x)", True),
    ("lam y:e. lam x:e. l(x,y)", "lam y:e. lam x:e. l(y,x)", False),
])
def test_alpha_equal(P, a, b, same):
    assert alpha_equal(P(a), P(b)) is same


def test_primary_mark_is_invisible_to_equality(P):
    assert P("l(j,m!)") == P("l(j,m)")
    assert P("l(j,m!)").arg.primary


def test_apply_subst_ground_equation(P):
    gd = P("lam y:e. lam x:e. l(x,y)")
    t = apply(FreeVar("Gd", arrows(E, E, T)), M)
    assert normalize(apply_subst({"Gd": gd}, t)) == P("lam x:e. l(x,m)")


def test_apply_empty_subst_is_identity(P):
    t = P("lam x:e. l(x,m)")
    assert apply_subst({}, t) is t


def test_apply_subst_avoids_capture(sig):
    # a binder that happens to be called like the image does not capture it
    t = Abs("m", E, apply(L, Bound(0), FreeVar("F", E)))
    out = apply_subst({"F": M}, t)
    assert out == Abs("x", E, apply(L, Bound(0), M))
    assert format_term(out) == "lam y:e. l(y,m)"


def test_apply_subst_rejects_ill_typed_image(P):
    with pytest.raises(TypeMismatch):
        apply_subst({"F": P("lam x:e. x")}, FreeVar("F", E))


def test_compose_is_idempotent():
    x, y = FreeVar("X", E), FreeVar("Y", E)
    sigma = compose({"X": apply(Const("f", arrows(E, E)), y)}, {"Y": M})
    once = apply_subst(sigma, apply(L, x, y))
    assert normalize(apply_subst(sigma, once)) == normalize(once)


@pytest.mark.parametrize("text, names", [
    ("Gd(m)", {"Gd"}),
    ("lam x:e. l(x,m)", set()),
])
def test_free_vars(sig, text, names):
    assert free_vars(parse_term(text, sig)) == names


def test_free_vars_of_soe_lhs():
    an = FreeVar("An", arrows(E, T))
    assert free_vars(apply(an, Const("p", E))) == {"An"}


def test_shift_leaves_closed_terms_alone(P):
    t = P("lam x:e. l(x,m)")
    assert shift(t, 3) == t


def test_size_counts_atoms(P):
    assert size(P("lam x:e. l(x,m)")) == 3


def test_format_avoids_constant_names():
    sig = Signature.with_consts(y=E, r=arrows(E, E, T))
    t = parse_term("lam a:e. r(a,y)", sig)
    text = format_term(t)
    assert "lam y':e." in text
    assert parse_term(text, sig) == t


def test_bare_family_name_is_rejected(P):
    with pytest.raises(ParseError):
        P("eq")


# -- properties ------------------------------------------------------------

seeds = st.integers(min_value=0, max_value=2**32 - 1)
GEN_SIG = Signature.with_consts(a=E, b=E, q=T, f=arrows(E, E), g=arrows(E, E, E), r=arrows(E, T),
                                h=arrows(arrows(E, E), E), c=arrows(T, T, T))


def _random(seed):
    rng = random.Random(seed)
    return random_term(rng, rng.choice(SMALL_TYPES), depth=4)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_normalize_is_idempotent(seed):
    n = normalize(_random(seed))
    assert normalize(n) == n


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_subject_reduction(seed):
    t = _random(seed)
    assert infer_type(normalize(t)) == infer_type(t)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_beta_normal_then_eta_agree_with_normalize(seed):
    t = _random(seed)
    assert normalize(beta_normal(t)) == normalize(t)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_print_parse_round_trip(seed):
    t = _random(seed)
    assert parse_term(format_term(t), GEN_SIG) == t


@settings(max_examples=100, deadline=None)
@given(seeds, seeds)
def test_substitution_preserves_types(seed, seed2):
    rng = random.Random(seed2)
    x = FreeVar("X", E)
    t = normalize(_random(seed))
    t = apply(Abs("v", E, t), x) if rng.random() < 0.5 else t
    image = random_term(rng, E, depth=3)
    assert infer_type(apply_subst({"X": image}, t)) == infer_type(t)
