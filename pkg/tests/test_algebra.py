from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import ATOMS, UNIVERSE, random_env
from schemalg import regex as rx
from schemalg.algebra import (
    FALSE, INF, TRUE, And, Betw, Contains, Environment, IsBoolValue, Items, Ite, MulOf, Not,
    NotMulOf, Or, PattReq, Pro, Prop, Ref, RepeatedItems, SchemaError, TypeAssert, UnguardedCycle,
    UniqueItems, XBetw, bound_normalize, check_env, encode_type, expand_ite, req, restrict, show_env,
    validate,
)
from schemalg.json_model import KIND_ORDER, Kind, kind_of


def test_typed_assertions_ignore_other_kinds():
    for s in (Betw(F(0), F(1)), Pro(1, 1), PattReq(rx.UNIVERSAL, TRUE), Contains(1, INF, TRUE)):
        assert validate("string", s)
        assert validate(None, s)


def test_number_assertions():
    assert validate(F(1), Betw(F(1), F(2)))
    assert not validate(F(1), XBetw(F(1), F(2)))
    assert validate(F(3, 2), MulOf(F(1, 2)))
    assert not validate(F(3, 2), MulOf(F(1)))
    assert validate(F(3, 2), NotMulOf(F(1)))
    assert validate(F(7), XBetw(-INF, INF))


def test_object_assertions():
    a = rx.literal("a")
    assert validate({"a": F(1)}, Prop(a, TypeAssert(Kind.NUM)))
    assert validate({"b": "x"}, Prop(a, TypeAssert(Kind.NUM)))
    assert not validate({"a": "x"}, Prop(a, TypeAssert(Kind.NUM)))
    assert validate({"a": F(1)}, PattReq(a, TRUE))
    assert not validate({}, PattReq(a, TRUE))
    assert validate({}, Pro(0, 0))


def test_array_assertions():
    v = [F(1), "a", F(2)]
    assert validate(v, Items(2, 2, TypeAssert(Kind.STR)))
    assert not validate(v, Items(2, INF, TypeAssert(Kind.STR)))
    assert validate(v, Items(5, INF, FALSE))
    assert validate(v, Ite((TypeAssert(Kind.NUM),), TRUE))
    assert validate(v, Contains(2, 2, TypeAssert(Kind.NUM)))
    assert not validate(v, Contains(3, INF, TypeAssert(Kind.NUM)))
    assert validate(v, UniqueItems())
    assert validate([F(1), F(1, 1)], RepeatedItems())
    assert validate([{"a": True, "b": None}, {"b": None, "a": True}], RepeatedItems())


@pytest.mark.parametrize("kind", KIND_ORDER)
def test_type_encodings(kind):
    s = encode_type(kind)
    for v in ATOMS + [[], [F(1)], {}, {"a": F(1)}]:
        assert validate(v, s) == (kind_of(v) is kind)


def test_req():
    s = req("a")
    assert validate({"a": None}, s)
    assert not validate({"b": None}, s)
    assert validate(F(1), s)


@given(st.sampled_from(UNIVERSE))
def test_expand_ite(v):
    s = Ite((TypeAssert(Kind.NUM), TypeAssert(Kind.STR)), IsBoolValue(True))
    assert validate(v, s) == validate(v, expand_ite(s))


DEGENERATE = [
    Pro(0, INF), Pro(2, 1), Betw(-INF, INF), Betw(F(2), F(1)), XBetw(F(1), F(1)),
    Contains(0, INF, TRUE), Contains(1, INF, FALSE), Contains(0, 2, FALSE), Items(3, 2, FALSE),
    Prop(rx.EMPTY, FALSE), PattReq(rx.EMPTY, TRUE), PattReq(rx.UNIVERSAL, FALSE),
]


@pytest.mark.parametrize("s", DEGENERATE, ids=repr)
def test_bound_normalize_preserves_meaning(s):
    t = bound_normalize(s)
    assert t != s
    for v in UNIVERSE:
        assert validate(v, s) == validate(v, t)


def test_recursive_definition():
    nested = And((TypeAssert(Kind.ARR), Items(1, 1, Ref("x"))))
    env = Environment({"x": Or((TypeAssert(Kind.NULL), nested))}, "x")
    assert validate([[[None]]], env)
    assert not validate([[F(1)]], env)


def test_unguarded_cycle_rejected():
    env = Environment({"x": And((Ref("y"), TRUE)), "y": Not(Ref("x"))}, "x")
    with pytest.raises(UnguardedCycle):
        check_env(env)
    check_env(Environment({"x": Prop(rx.UNIVERSAL, Not(Ref("x")))}, "x"))


def test_undefined_reference_rejected():
    with pytest.raises(SchemaError):
        check_env(Environment({"x": Items(1, 1, Ref("nope"))}, "x"))


def test_restrict_drops_unreachable():
    env = Environment({"x": Items(1, 1, Ref("y")), "y": TRUE, "z": FALSE}, "x")
    assert list(restrict(env).defs) == ["x", "y"]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_random_environments_are_guarded_and_printable(seed):
    env = random_env(seed)
    check_env(env)
    assert "x0" in show_env(env)
