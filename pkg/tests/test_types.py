import pytest
from hypothesis import given, strategies as st

from hou_focus.errors import ParseError, TypeMismatch
from hou_focus.term_core import E, T, Arrow, SetOf, Signature, TyVar, arrows, order_of_type, parse_type
from hou_focus.term_core.types import fresh_tyvar, resolve, split_arrow, unify_types

types = st.recursive(
    st.sampled_from([E, T]),
    lambda inner: st.one_of(st.builds(Arrow, inner, inner), st.builds(SetOf, inner)),
    max_leaves=6,
)


@pytest.mark.parametrize("text, expected", [
    ("e", E),
    ("e > e > t", Arrow(E, Arrow(E, T))),
    ("(e > t) > t", Arrow(Arrow(E, T), T)),
    ("set(e > t)", SetOf(Arrow(E, T))),
])
def test_parse_type(text, expected):
    assert parse_type(text) == expected


def test_parse_type_rejects_undeclared_base():
    with pytest.raises(ParseError):
        parse_type("q > t", Signature())


@pytest.mark.parametrize("ty, order", [
    (E, 1),
    (arrows(E, T), 2),
    (arrows(arrows(E, T), T), 3),
    (SetOf(arrows(E, T)), 2),
    (arrows(E, E, T), 2),
])
def test_order_of_type(ty, order):
    assert order_of_type(ty) == order


def test_order_rejects_tyvar():
    with pytest.raises(TypeMismatch):
        order_of_type(arrows(fresh_tyvar(), T))


@given(types)
def test_print_parse_round_trip(ty):
    assert parse_type(str(ty)) == ty


@given(types, types)
def test_order_of_arrow(a, b):
    assert order_of_type(Arrow(a, b)) == max(order_of_type(a) + 1, order_of_type(b))


def test_split_arrow():
    assert split_arrow(arrows(E, E, T)) == ([E, E], T)
    assert split_arrow(arrows(E, E, T), 1) == ([E], arrows(E, T))


def test_unify_types_binds_and_resolves():
    a, b = fresh_tyvar(), fresh_tyvar()
    subst = {}
    unify_types(Arrow(a, T), Arrow(E, b), subst)
    assert resolve(Arrow(a, b), subst) == Arrow(E, T)


def test_unify_types_occurs_check():
    a = fresh_tyvar()
    with pytest.raises(TypeMismatch):
        unify_types(a, Arrow(a, T), {})


def test_unify_types_clash():
    with pytest.raises(TypeMismatch):
        unify_types(E, T, {})


def test_tyvar_prints_with_question_mark():
    assert str(TyVar(7)) == "?7"
