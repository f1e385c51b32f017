from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import UNIVERSE, positive_system, random_env
from schemalg import regex as rx
from schemalg.algebra import INF, Betw, Environment, MulOf, Prop, Ref, validate
from schemalg.frontend import translate
from schemalg.ir import dump_env, dump_schema, load_env, load_schema_ir, to_json_schema
from schemalg.json_model import parse_json, serialize_json
from schemalg.negation import eliminate_not
from schemalg.normalizer import normalize


def through_text(doc):
    return parse_json(serialize_json(doc))


def test_bounds_encoding():
    d = dump_schema(Betw(F(1, 2), INF))
    assert d["min"] == "0.5" and d["max"] is None
    assert load_schema_ir(d) == Betw(F(1, 2), INF)
    assert load_schema_ir(dump_schema(MulOf(F(1, 3)))) == MulOf(F(1, 3))
    assert dump_schema(Betw(-INF, F(2)))["min"] is None
    empty = Betw(-INF, -INF)
    assert load_schema_ir(through_text(dump_schema(empty))) == empty


def test_pattern_encoding():
    s = Prop(rx.parse_pattern("^a[^b]"), Ref("x"))
    back = load_schema_ir(through_text(dump_schema(s)))
    assert rx.equivalent(back.pattern, s.pattern)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_environment_round_trip(seed):
    env = random_env(seed)
    assert load_env(through_text(dump_env(env))) == env


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_prepared_environment_round_trip(seed):
    env = normalize(random_env(seed, uniqueness=False))
    assert load_env(through_text(dump_env(env))) == env


def test_prepared_objects_round_trip():
    env = positive_system()
    assert load_env(through_text(dump_env(env))) == env


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_exported_json_schema_keeps_meaning(seed):
    env = eliminate_not(random_env(seed))
    doc = through_text(to_json_schema(env))
    back = translate(doc)
    for v in UNIVERSE[::9]:
        assert validate(v, back) == validate(v, env)


def test_export_uses_plain_keywords_where_possible():
    env = translate({"type": "integer"})
    doc = to_json_schema(env)
    assert "definitions" in doc and doc["$ref"].startswith("#/definitions/")
    text = serialize_json(doc)
    assert "x-mulOf" in text or "multipleOf" in text


def test_exported_negation_is_complement():
    env = translate({"type": "object", "required": ["a"]})
    completed = eliminate_not(env)
    neg = Environment(completed.defs, completed.complement[completed.root], completed.complement)
    back = translate(through_text(to_json_schema(neg)))
    for v in UNIVERSE:
        assert validate(v, back) == (not validate(v, env))
