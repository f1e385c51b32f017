"""Shared generators: a bounded value universe and random algebra terms."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from schemalg import regex as rx
from schemalg.algebra import (
    FALSE,
    INF,
    TRUE,
    And,
    Betw,
    Contains,
    Environment,
    IsBoolValue,
    Items,
    Ite,
    MulOf,
    Not,
    NotMulOf,
    NotPattern,
    Or,
    PattReq,
    PatternAssert,
    Pro,
    Prop,
    Ref,
    RepeatedItems,
    TypeAssert,
    UniqueItems,
    XBetw,
)
from schemalg.json_model import KIND_ORDER

ATOMS = [None, True, False, Fraction(0), Fraction(1), Fraction(3), Fraction(-2), Fraction(1, 2),
         Fraction(6), "", "a", "ab", "b", "ba"]
SMALL = [None, Fraction(1), "a", True]


def _universe():
    out = list(ATOMS)
    out += [list(p) for n in range(3) for p in itertools.product(ATOMS, repeat=n)]
    keys = ["a", "b"]
    for n in range(3):
        for names in itertools.combinations(keys, n):
            for vals in itertools.product(ATOMS, repeat=n):
                out.append(dict(zip(names, vals)))
    small_obj = [{}, {"a": Fraction(1)}, {"b": None}, {"a": "a", "b": Fraction(1)}]
    small_arr = [[], [Fraction(1)], ["a", None]]
    nested = small_obj + small_arr
    for x in nested:
        out.append([x])
        out.append([x, Fraction(1)])
        out.append({"a": x})
        out.append({"b": x})
        out.append({"a": x, "b": Fraction(1)})
    for x in nested:
        for y in nested:
            out.append([x, y])
    out += [{"a": {"a": {"a": Fraction(1)}}}, {"a": {"a": {"a": {"a": Fraction(1)}}}}, [[[]]], [[Fraction(1), "a"]]]
    out += [list(p) for p in itertools.product([None, Fraction(0), Fraction(1), "a", "", True], repeat=3)]
    out += [list(p) for p in itertools.product([Fraction(1), "a", None], repeat=4)]
    out += [{"ab": x} for x in ATOMS] + [{"": x} for x in ATOMS]
    out += [dict(zip(("a", "b", "ab"), p)) for p in itertools.product(SMALL, repeat=3)]
    return out


UNIVERSE = _universe()

PATTERNS = [
    rx.literal("a"), rx.literal("b"), rx.literal(""), rx.parse_pattern("^a"), rx.parse_pattern("b"),
    rx.parse_pattern("^.b"), rx.parse_pattern("^[ab]$"), rx.parse_extended("~(a)"),
    rx.UNIVERSAL, rx.parse_extended("a|ab"),
]
NUMBERS = [Fraction(-2), Fraction(0), Fraction(1), Fraction(1, 2), Fraction(3), -INF, INF]
MODULI = [Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2)]


class SchemaGen:
    """Random algebra terms; references only appear under typed operators,
    so every generated environment is guarded."""

    def __init__(self, rng: random.Random, variables=(), uniqueness=True, negation=True):
        self.rng = rng
        self.variables = list(variables)
        self.uniqueness = uniqueness
        self.negation = negation

    def bound_pair(self, values):
        a, b = self.rng.choice(values), self.rng.choice(values)
        return (a, b) if a <= b or self.rng.random() < 0.1 else (b, a)

    def count(self):
        return self.rng.choice([0, 0, 1, 1, 2, 3])

    def count_pair(self):
        lo = self.count()
        hi = self.rng.choice([INF, INF, lo, lo + 1, lo + 2, max(lo - 1, 0)])
        return lo, hi

    def argument(self, depth):
        r = self.rng.random()
        if self.variables and r < 0.3:
            return Ref(self.rng.choice(self.variables))
        if r < 0.4:
            return self.rng.choice([TRUE, FALSE])
        return self.schema(depth - 1)

    def typed(self, depth):
        rng = self.rng
        ops = ["type", "bool", "pattern", "notPattern", "betw", "xBetw", "mulOf", "notMulOf",
               "pro", "prop", "pattReq", "items", "ite", "contains"]
        if self.uniqueness:
            ops += ["unique", "repeated"]
        op = rng.choice(ops)
        if op == "type":
            return TypeAssert(rng.choice(KIND_ORDER))
        if op == "bool":
            return IsBoolValue(rng.random() < 0.5)
        if op == "pattern":
            return PatternAssert(rng.choice(PATTERNS))
        if op == "notPattern":
            return NotPattern(rng.choice(PATTERNS))
        if op in ("betw", "xBetw"):
            lo, hi = self.bound_pair(NUMBERS)
            return (Betw if op == "betw" else XBetw)(lo, hi)
        if op == "mulOf":
            return MulOf(rng.choice(MODULI))
        if op == "notMulOf":
            return NotMulOf(rng.choice(MODULI))
        if op == "pro":
            return Pro(*self.count_pair())
        if op == "prop":
            return Prop(rng.choice(PATTERNS), self.argument(depth))
        if op == "pattReq":
            return PattReq(rng.choice(PATTERNS), self.argument(depth))
        if op == "items":
            lo = rng.choice([1, 1, 2])
            hi = rng.choice([lo, lo + 1, INF])
            return Items(lo, hi, self.argument(depth))
        if op == "ite":
            n = rng.choice([0, 1, 1, 2])
            return Ite(tuple(self.argument(depth) for _ in range(n)), self.argument(depth))
        if op == "contains":
            lo, hi = self.count_pair()
            return Contains(lo, hi, self.argument(depth))
        if op == "unique":
            return UniqueItems()
        return RepeatedItems()

    def schema(self, depth=3):
        rng = self.rng
        if depth <= 0:
            return self.typed(0) if rng.random() < 0.9 else rng.choice([TRUE, FALSE])
        r = rng.random()
        if r < 0.45:
            return self.typed(depth)
        if r < 0.65:
            return And(tuple(self.schema(depth - 1) for _ in range(rng.choice([2, 2, 3]))))
        if r < 0.85:
            return Or(tuple(self.schema(depth - 1) for _ in range(rng.choice([2, 2, 3]))))
        if self.negation:
            return Not(self.schema(depth - 1))
        return self.typed(depth)

    def env(self, n_vars=2, depth=3) -> Environment:
        names = [f"x{i}" for i in range(n_vars)]
        self.variables = names
        defs = {name: self.schema(depth) for name in names}
        return Environment(defs, names[0])


def random_env(seed, **kw) -> Environment:
    n_vars = kw.pop("n_vars", 2)
    depth = kw.pop("depth", 3)
    return SchemaGen(random.Random(seed), **kw).env(n_vars, depth)


def count_not(s) -> int:
    from schemalg.algebra import children

    return int(isinstance(s, Not)) + sum(count_not(c) for c in children(s))


def _obj(*requirements, lo=0, hi=INF):
    from schemalg.algebra import OrPattReq, PreparedObject

    reqs = tuple(OrPattReq(tuple((rx.literal(n), Ref(v)) for n, v in alts)) for alts in requirements)
    return PreparedObject(lo, hi, ((rx.UNIVERSAL, TRUE),), reqs)


def positive_system() -> Environment:
    """Six mutually recursive variables; x gets a witness on the third pass."""
    from schemalg.algebra import Group
    from schemalg.json_model import Kind

    return Environment({
        "x": Or((_obj([("a", "l"), ("b", "y")]),)),
        "y": Or((_obj([("a", "z"), ("b", "k")], [("c", "m")]),)),
        "k": Or((_obj([("a", "l")]),)),
        "l": Or((_obj([("a", "x")], hi=0),)),
        "z": Or((_obj([("a", "x")]), Group(Kind.NULL, ()))),
        "m": Or((Group(Kind.NUM, ()),)),
    }, "x")


def negative_system() -> Environment:
    """x and y only require each other, so neither has a witness."""
    from schemalg.algebra import Group
    from schemalg.json_model import Kind

    return Environment({
        "x": Or((_obj([("a", "y")]),)),
        "y": Or((_obj([("a", "z")], [("b", "x")]),)),
        "z": Or((_obj([("a", "y")]), Group(Kind.NUM, ()))),
    }, "x")
