"""The ten acceptance criteria, one test each.

Run with pytest (a summary line per criterion is printed at the end) or
directly: ``python3 tests/test_acceptance.py``.
"""

import itertools
import json
import random
import sys
import time
import warnings
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from helpers import UNIVERSE, SchemaGen, count_not, negative_system, positive_system, random_env  # noqa: E402
from schemalg import regex as rx  # noqa: E402
from schemalg.algebra import (  # noqa: E402
    FALSE, TRUE, And, Environment, Group, Ite, Not, Or, PattReq, Prop, Ref, TypeAssert, validate,
)
from schemalg.frontend import translate  # noqa: E402
from schemalg.json_model import Kind, parse_json  # noqa: E402
from schemalg.negation import eliminate_not, negate_items  # noqa: E402
from schemalg.normalizer import (  # noqa: E402
    VarFactory, canonicalize_env, expand, normalize, separate, to_dnf,
)
from schemalg.preparation import check_object_invariants, choice_sets, prepare_group, prepare_object  # noqa: E402
from schemalg.witness import EMPTY, check_inclusion, is_populated, run_fixpoint  # noqa: E402

TITLES = {
    1: "negation duality on 500 random schemas",
    2: "items-negation formulas against direct negation",
    3: "every normalization phase preserves verdicts",
    4: "positive fixpoint example",
    5: "negative fixpoint example",
    6: "recursive not-elimination example",
    7: "object preparation example",
    8: "emptiness soundness against enumeration",
    9: "inclusion spot-checks",
    10: "Draft-06 test suite subset",
}


def test_criterion_1():
    start = time.time()
    mismatches = nots = 0
    for seed in range(500):
        env = random_env(10_000 + seed)
        out = eliminate_not(env)
        nots += sum(count_not(b) for b in out.defs.values())
        neg_root = Ref(out.complement[env.root])
        for v in UNIVERSE:
            if validate(v, neg_root, out) == validate(v, env):
                mismatches += 1
    assert nots == 0
    assert mismatches == 0
    assert time.time() - start < 120


def test_criterion_2():
    three = [None, parse_json("1"), "a"]
    kinds = [Kind.NULL, Kind.NUM, Kind.STR]
    # every subset of the three values, written with type assertions
    pool = [TRUE, FALSE] + [
        Or(tuple(TypeAssert(k) for k, b in zip(kinds, bits) if b))
        for bits in itertools.product((0, 1), repeat=3) if 0 < sum(bits) < 3
    ] + [TypeAssert(k) for k in kinds]
    arrays = [list(p) for n in range(5) for p in itertools.product(three, repeat=n)]
    rng = random.Random(2)
    cases = [((), t) for t in pool] + [
        (tuple(rng.choice(pool) for _ in range(rng.randint(1, 3))), rng.choice(pool)) for _ in range(400)
    ]
    for prefix, tail in cases:
        neg = negate_items(prefix, tail, {})
        for v in arrays:
            assert validate(v, neg) == (not validate(v, Ite(prefix, tail))), (prefix, tail, v)


def _phase_envs(env):
    """(phase, before, after) environments plus prepared groups."""
    e0 = eliminate_not(env)
    e1 = canonicalize_env(e0)
    factory = VarFactory(e1)
    e2 = separate(e1, factory)
    e3 = expand(e2)
    e4 = to_dnf(e3)
    groups = [(g, prepare_group(g, factory)) for body in e4.defs.values() for g in body.items]
    defs = dict(e4.defs)
    defs.update(factory.take_new())
    full = Environment(defs, e4.root, dict(factory.complement))
    return [("canonicalize", e0, e1), ("separate", e1, e2), ("expand", e2, e3), ("to_dnf", e3, e4)], groups, full


def test_criterion_3():
    counts = dict.fromkeys(["canonicalize", "separate", "expand", "to_dnf", "prepare_object_group",
                            "prepare_array_group"], 0)
    rng = random.Random(3)
    seed = 0
    while min(counts.values()) < 200:
        seed += 1
        gen = SchemaGen(random.Random(30_000 + seed), uniqueness=False)
        env = gen.env(2, 3)
        kind = [Kind.OBJ, Kind.ARR][seed % 2]
        env.defs[env.root] = And((TypeAssert(kind), env.defs[env.root]))
        phases, groups, full = _phase_envs(env)
        values = rng.sample(UNIVERSE, 10)
        for name, before, after in phases:
            for v in values:
                assert validate(v, before) == validate(v, after), (name, seed, v)
                counts[name] += 1
        for g, p in groups:
            if g.kind not in (Kind.OBJ, Kind.ARR):
                continue
            name = "prepare_object_group" if g.kind is Kind.OBJ else "prepare_array_group"
            for v in rng.sample(UNIVERSE, 5):
                assert validate(v, g, full) == validate(v, p, full), (name, seed, v)
                counts[name] += 1
    assert min(counts.values()) >= 200


def test_criterion_4():
    env = positive_system()
    out = run_fixpoint(env)
    assert out.satisfiable and out.passes <= 3
    assert out.trace[1]["l"] is EMPTY
    assert out.trace[2]["k"] is EMPTY
    assert validate(out.witness, env)
    assert validate(parse_json('{"b":{"a":null,"c":3}}'), env)


def test_criterion_5():
    out = run_fixpoint(negative_system())
    assert not out.satisfiable
    assert out.states["x"] is EMPTY and out.states["y"] is EMPTY
    assert is_populated(out.states["z"])


def test_criterion_6():
    env = Environment({"x": Prop(rx.literal("a"), Not(Ref("x")))}, "x")
    out = normalize(env)
    for text, want in [("1", True), ('{"a":{"a":1}}', True), ('{"a":{"a":{"a":{"a":1}}}}', True),
                       ('{"a":1}', False)]:
        assert validate(parse_json(text), out) is want, text


def test_criterion_7():
    P = rx.parse_pattern
    env = eliminate_not(Environment({
        "x": Group(Kind.OBJ, ()), "x1": Group(Kind.NUM, ()),
        "x2": Group(Kind.STR, ()), "x3": Group(Kind.NULL, ()),
    }, "x"))
    factory = VarFactory(env)
    group = Group(Kind.OBJ, (
        Prop(P("^a"), Ref("x1")), Prop(P("^.b"), Ref("x2")),
        PattReq(P("^.d"), TRUE), PattReq(P("^a"), Ref("x3")),
    ))
    prepared = prepare_object(group, factory)
    assert all(not v for v in check_object_invariants(prepared, factory).values())
    assert [len(q.alternatives) for q in prepared.requiring] == [3, 3]
    first, second = (set(q.alternatives) for q in prepared.requiring)
    assert len(first & second) == 1
    assert len(choice_sets(prepared)) == 5
    # language equality with the published regions; those four sets miss the
    # empty name and every one-character name, so no partition of all names
    # can equal them (see the decision log)
    expected = [P(s) for s in ("^a[^b]", "^ab", "^[^a]b", "^[^a][^b]")]
    produced = [r for r, _ in prepared.constraining]
    unmatched = [rx.to_text(r) for r in produced if not any(rx.equivalent(r, e) for e in expected)]
    assert not unmatched, f"regions not equal to any expected pattern: {unmatched}"


def test_criterion_8():
    start = time.time()
    violations, checked = [], 0
    for seed in range(300):
        rng = random.Random(80_000 + seed)
        gen = SchemaGen(rng, uniqueness=False)
        env = gen.env(3, 3)
        kind = rng.choice([Kind.OBJ, Kind.ARR, Kind.OBJ, Kind.ARR, Kind.NUM, Kind.STR])
        env.defs[env.root] = And((TypeAssert(kind), env.defs[env.root], gen.schema(2)))
        out = run_fixpoint(normalize(env))
        checked += 1
        if out.satisfiable:
            if not validate(out.witness, env):
                violations.append((seed, "witness does not validate"))
        elif any(validate(v, env) for v in UNIVERSE):
            violations.append((seed, "member found but answered unsatisfiable"))
    assert checked >= 300
    assert violations == []
    assert time.time() - start < 300


def test_criterion_9():
    integer, number = translate({"type": "integer"}), translate({"type": "number"})
    assert check_inclusion(integer, number).included
    res = check_inclusion(number, integer)
    assert not res.included
    assert validate(res.counterexample, number) and not validate(res.counterexample, integer)
    doc = {"properties": {"foo": {}}, "additionalProperties": {"type": "boolean"}}
    env = translate(doc)
    assert validate(parse_json('{"foo":1,"extra":true}'), env)
    assert not validate(parse_json('{"extra":1}'), env)


def test_criterion_10():
    import test_draft6_suite as suite

    exclusions = suite.EXCLUSIONS
    assert all(e.get("reason") for entries in exclusions.values() for e in entries)
    total = passed = 0
    for path in sorted(suite.SUITE.glob("*.json")):
        for group in parse_json(path.read_bytes()):
            if suite.excluded(path.name, group["description"]):
                continue
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                env = translate(group["schema"], suite.DOCUMENTS)
            for case in group["tests"]:
                total += 1
                passed += validate(case["data"], env) == case["valid"]
    assert total > 700
    assert passed == total, f"{total - passed} of {total} cases disagree"


if __name__ == "__main__":
    failed = 0
    for n in range(1, 11):
        try:
            globals()[f"test_criterion_{n}"]()
            verdict = "PASS"
        except AssertionError as e:
            verdict = f"FAIL ({e})" if str(e) else "FAIL"
            failed += 1
        print(f"criterion {n:2d}: {verdict}  {TITLES[n]}")
    sys.exit(1 if failed else 0)
