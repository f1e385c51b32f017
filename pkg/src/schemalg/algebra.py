"""Core schema algebra: terms, environments and the reference validator.

Every typed assertion is implicative: it constrains instances of its own
kind and accepts everything else.  Bounds are exact rationals or integers;
``INF`` (``math.inf``) stands for an absent upper bound and ``-INF`` for an
absent lower bound.

Patterns are :class:`schemalg.regex.Regex` terms denoting whole-string
languages; the frontend takes care of search semantics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import regex as rx
from .json_model import KIND_ORDER, Kind, json_equal, kind_of, to_fraction

INF = math.inf


class SchemaError(ValueError):
    pass


class UnguardedCycle(SchemaError):
    def __init__(self, cycle):
        super().__init__("unguarded reference cycle: " + " -> ".join(cycle))
        self.cycle = cycle


class Schema:
    __slots__ = ()

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return show(self)


def _node(cls):
    return dataclass(frozen=True, eq=True, repr=True)(cls)


@_node
class Top(Schema):
    pass


@_node
class Bottom(Schema):
    pass


TRUE = Top()
FALSE = Bottom()


@_node
class IsBoolValue(Schema):
    value: bool


@_node
class PatternAssert(Schema):
    pattern: rx.Regex


@_node
class NotPattern(Schema):
    pattern: rx.Regex


@_node
class Betw(Schema):
    lo: object
    hi: object


@_node
class XBetw(Schema):
    lo: object
    hi: object


@_node
class MulOf(Schema):
    n: Fraction


@_node
class NotMulOf(Schema):
    n: Fraction


@_node
class Pro(Schema):
    lo: int
    hi: object


@_node
class Prop(Schema):
    pattern: rx.Regex
    schema: Schema


@_node
class PattReq(Schema):
    pattern: rx.Regex
    schema: Schema


@_node
class OrPattReq(Schema):
    """Some member matches one of the (pattern, schema) alternatives."""

    alternatives: tuple


@_node
class Items(Schema):
    """Positions lo..hi (1-based, inclusive) satisfy schema."""

    lo: int
    hi: object
    schema: Schema


@_node
class Ite(Schema):
    prefix: tuple
    tail: Schema


@_node
class Contains(Schema):
    lo: int
    hi: object
    schema: Schema


@_node
class UniqueItems(Schema):
    pass


@_node
class RepeatedItems(Schema):
    pass


@_node
class TypeAssert(Schema):
    kind: Kind


@_node
class And(Schema):
    items: tuple


@_node
class Or(Schema):
    items: tuple


@_node
class Not(Schema):
    item: Schema


@_node
class Ref(Schema):
    name: str


@_node
class Group(Schema):
    """type(kind) conjoined with typed assertions of that kind."""

    kind: Kind
    items: tuple


@_node
class PreparedObject(Schema):
    """An object group after preparation.

    ``constraining`` holds (pattern, schema) pairs whose patterns partition
    all names; ``requiring`` holds OrPattReq nodes whose alternatives are
    pairwise pattern-disjoint or schema-disjoint.
    """

    lo: int
    hi: object
    constraining: tuple
    requiring: tuple


@_node
class PreparedArray(Schema):
    """An array group after preparation.

    ``contains`` holds (lo, hi, schema) triples.  ``profiles`` maps
    (position, included contains indexes) to the variable standing for the
    conjunction of the position schema with the included contains schemas
    and the complements of excluded bounded ones; position -1 is the tail.
    """

    prefix: tuple
    tail: Schema
    contains: tuple
    lo: int
    hi: object
    profiles: tuple = field(default=(), compare=True)

    def profile(self, position, included):
        for pos, inc, var in self.profiles:
            if pos == position and inc == included:
                return var
        raise KeyError((position, included))


TYPED = {
    IsBoolValue: Kind.BOOL,
    PatternAssert: Kind.STR,
    NotPattern: Kind.STR,
    Betw: Kind.NUM,
    XBetw: Kind.NUM,
    MulOf: Kind.NUM,
    NotMulOf: Kind.NUM,
    Pro: Kind.OBJ,
    Prop: Kind.OBJ,
    PattReq: Kind.OBJ,
    OrPattReq: Kind.OBJ,
    Items: Kind.ARR,
    Ite: Kind.ARR,
    Contains: Kind.ARR,
    UniqueItems: Kind.ARR,
    RepeatedItems: Kind.ARR,
}


def assertion_kind(s: Schema):
    """Kind constrained by a typed assertion, or None."""
    return TYPED.get(type(s))


@dataclass
class Environment:
    """Variable definitions with a designated root variable.

    ``complement`` maps a variable to the variable defined as its negation,
    when one exists.
    """

    defs: dict
    root: str
    complement: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.defs[name]

    def copy(self):
        return Environment(dict(self.defs), self.root, dict(self.complement))


def conj(*items: Schema) -> Schema:
    out = []
    for s in items:
        if isinstance(s, And):
            out.extend(x for x in s.items if x != TRUE)
        elif s == FALSE:
            return FALSE
        elif s != TRUE:
            out.append(s)
    if FALSE in out:
        return FALSE
    out = list(dict.fromkeys(out))
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*items: Schema) -> Schema:
    out = []
    for s in items:
        if isinstance(s, Or):
            out.extend(x for x in s.items if x != FALSE)
        elif s == TRUE:
            return TRUE
        elif s != FALSE:
            out.append(s)
    if TRUE in out:
        return TRUE
    out = list(dict.fromkeys(out))
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


# encodings of derived operators

def encode_type(kind: Kind) -> Schema:
    """type(kind) written with negation and two incompatible assertions."""
    if kind is Kind.STR:
        return Not(And((PatternAssert(rx.EPS), PatternAssert(rx.cat(rx.ANY, rx.UNIVERSAL)))))
    if kind is Kind.NUM:
        return Not(And((Betw(Fraction(0), Fraction(0)), Betw(Fraction(1), Fraction(1)))))
    if kind is Kind.BOOL:
        return Not(And((IsBoolValue(True), IsBoolValue(False))))
    if kind is Kind.OBJ:
        return Not(And((Pro(0, 0), Pro(1, 1))))
    if kind is Kind.ARR:
        return Not(And((Items(1, 1, FALSE), Contains(1, INF, TRUE))))
    others = [k for k in KIND_ORDER if k is not Kind.NULL]
    return And(tuple(Not(encode_type(k)) for k in others))


def not_type(kind: Kind) -> Schema:
    """Instances of every kind but ``kind``."""
    return Or(tuple(TypeAssert(k) for k in KIND_ORDER if k is not kind))


def implies_type(kind: Kind, s: Schema) -> Schema:
    return disj(not_type(kind), s)


def name_pattern(k: str) -> rx.Regex:
    """The pattern ^k$ matching exactly the name k."""
    return rx.literal(k)


def req(k: str) -> Schema:
    """Objects must have a member named k."""
    return implies_type(Kind.OBJ, Not(Prop(name_pattern(k), FALSE)))


def ite(prefix, tail) -> Schema:
    prefix = tuple(prefix)
    if not prefix and tail == TRUE:
        return TRUE
    return Ite(prefix, tail)


def expand_ite(s: Ite) -> Schema:
    """Ite as the conjunction of its positional Items constraints."""
    n = len(s.prefix)
    parts = [Items(i + 1, i + 1, p) for i, p in enumerate(s.prefix)]
    parts.append(Items(n + 1, INF, s.tail))
    return conj(*parts)


def bound_normalize(s: Schema) -> Schema:
    """Rewrite degenerate bounds (trivial or empty ranges) at the top of s."""
    if isinstance(s, Pro):
        if s.lo == 0 and s.hi == INF:
            return TRUE
        if s.lo > s.hi:
            return not_type(Kind.OBJ)
    elif isinstance(s, Betw):
        if s.lo == -INF and s.hi == INF:
            return TRUE
        if s.lo > s.hi:
            return not_type(Kind.NUM)
    elif isinstance(s, XBetw):
        if s.lo == -INF and s.hi == INF:
            return TRUE
        if s.lo >= s.hi:
            return not_type(Kind.NUM)
    elif isinstance(s, Contains):
        if s.lo == 0 and s.hi == INF:
            return TRUE
        if s.lo > s.hi:
            return not_type(Kind.ARR)
        if s.schema == FALSE:
            return TRUE if s.lo == 0 else not_type(Kind.ARR)
    elif isinstance(s, Items):
        if s.hi < s.lo or s.schema == TRUE:
            return TRUE
    elif isinstance(s, Ite):
        if not s.prefix and s.tail == TRUE:
            return TRUE
    elif isinstance(s, (Prop, PattReq)):
        if rx.is_empty(s.pattern):
            return TRUE if isinstance(s, Prop) else not_type(Kind.OBJ)
        if isinstance(s, Prop) and s.schema == TRUE:
            return TRUE
        if isinstance(s, PattReq) and s.schema == FALSE:
            return not_type(Kind.OBJ)
    elif isinstance(s, (PatternAssert, NotPattern)):
        d = rx.compile_regex(s.pattern)
        universal = d.is_universal() if isinstance(s, PatternAssert) else d.is_empty()
        if universal:
            return TRUE
        if (d.is_empty() if isinstance(s, PatternAssert) else d.is_universal()):
            return not_type(Kind.STR)
    return s


# traversal helpers

def children(s: Schema):
    """Immediate subschemas (boolean operands and typed-assertion arguments)."""
    if isinstance(s, (And, Or, Group)):
        return s.items
    if isinstance(s, Not):
        return (s.item,)
    if isinstance(s, (Prop, PattReq, Items, Contains)):
        return (s.schema,)
    if isinstance(s, OrPattReq):
        return tuple(x for _, x in s.alternatives)
    if isinstance(s, Ite):
        return s.prefix + (s.tail,)
    if isinstance(s, PreparedObject):
        return tuple(x for _, x in s.constraining) + s.requiring
    if isinstance(s, PreparedArray):
        return s.prefix + (s.tail,) + tuple(c[2] for c in s.contains) + tuple(v for *_, v in s.profiles)
    return ()


def map_args(s: Schema, f) -> Schema:
    """Apply f to every argument of a typed assertion (not to boolean operands)."""
    if isinstance(s, Prop):
        return Prop(s.pattern, f(s.schema))
    if isinstance(s, PattReq):
        return PattReq(s.pattern, f(s.schema))
    if isinstance(s, OrPattReq):
        return OrPattReq(tuple((r, f(x)) for r, x in s.alternatives))
    if isinstance(s, Items):
        return Items(s.lo, s.hi, f(s.schema))
    if isinstance(s, Contains):
        return Contains(s.lo, s.hi, f(s.schema))
    if isinstance(s, Ite):
        return Ite(tuple(f(x) for x in s.prefix), f(s.tail))
    return s


def refs_in(s: Schema, out=None) -> set:
    if out is None:
        out = set()
    if isinstance(s, Ref):
        out.add(s.name)
    for c in children(s):
        refs_in(c, out)
    return out


def unguarded_refs(s: Schema, out=None) -> set:
    """References reachable through boolean operators only."""
    if out is None:
        out = set()
    if isinstance(s, Ref):
        out.add(s.name)
    elif isinstance(s, (And, Or)):
        for c in s.items:
            unguarded_refs(c, out)
    elif isinstance(s, Not):
        unguarded_refs(s.item, out)
    return out


def check_env(env: Environment) -> None:
    """Raise on undefined references or unguarded reference cycles."""
    if env.root not in env.defs:
        raise SchemaError(f"root variable {env.root!r} is not defined")
    for name, body in env.defs.items():
        for r in refs_in(body):
            if r not in env.defs:
                raise SchemaError(f"variable {name!r} refers to undefined {r!r}")
    deps = {name: sorted(unguarded_refs(body)) for name, body in env.defs.items()}
    state = {}
    for start in sorted(deps):
        if state.get(start):
            continue
        stack = [(start, iter(deps[start]))]
        path = [start]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
                path.pop()
                continue
            st = state.get(nxt)
            if st == 1:
                raise UnguardedCycle(path[path.index(nxt):] + [nxt])
            if st is None:
                state[nxt] = 1
                stack.append((nxt, iter(deps[nxt])))
                path.append(nxt)


def reachable(env: Environment, roots=None) -> list:
    """Variables reachable from the roots, in discovery order."""
    seen = []
    index = set()
    stack = list(reversed(roots if roots is not None else [env.root]))
    while stack:
        v = stack.pop()
        if v in index:
            continue
        index.add(v)
        seen.append(v)
        stack.extend(sorted(refs_in(env.defs[v]), reverse=True))
    return seen


def restrict(env: Environment, roots=None) -> Environment:
    keep = reachable(env, roots)
    defs = {v: env.defs[v] for v in keep}
    comp = {a: b for a, b in env.complement.items() if a in defs and b in defs}
    return Environment(defs, env.root, comp)


# semantics

def _mul(q: Fraction, n: Fraction) -> bool:
    return (q / n).denominator == 1


class Validator:
    def __init__(self, env: Environment | None):
        self.env = env
        self.memo = {}

    def check(self, v, s: Schema) -> bool:
        t = type(s)
        if t is Ref:
            key = (s.name, id(v))
            hit = self.memo.get(key)
            if hit is None:
                hit = self.memo[key] = (self.check(v, self.env.defs[s.name]), v)
            return hit[0]
        if t is And:
            return all(self.check(v, x) for x in s.items)
        if t is Or:
            return any(self.check(v, x) for x in s.items)
        if t is Not:
            return not self.check(v, s.item)
        if t is Top:
            return True
        if t is Bottom:
            return False
        k = kind_of(v)
        if t is TypeAssert:
            return k is s.kind
        if t is Group:
            return k is s.kind and all(self.check(v, x) for x in s.items)
        want = TYPED.get(t)
        if want is None:
            if t is PreparedObject:
                return k is Kind.OBJ and self.prepared_object(v, s)
            if t is PreparedArray:
                return k is Kind.ARR and self.prepared_array(v, s)
            raise TypeError(f"not a schema: {s!r}")
        if k is not want:
            return True
        if t is IsBoolValue:
            return v == s.value
        if t is PatternAssert:
            return rx.matches(s.pattern, v)
        if t is NotPattern:
            return not rx.matches(s.pattern, v)
        if t in (Betw, XBetw, MulOf, NotMulOf):
            q = to_fraction(v)
            if t is Betw:
                return s.lo <= q <= s.hi
            if t is XBetw:
                return s.lo < q < s.hi
            if t is MulOf:
                return _mul(q, s.n)
            return not _mul(q, s.n)
        if t is Pro:
            return s.lo <= len(v) <= s.hi
        if t is Prop:
            return all(self.check(x, s.schema) for name, x in v.items() if rx.matches(s.pattern, name))
        if t is PattReq:
            return any(self.check(x, s.schema) for name, x in v.items() if rx.matches(s.pattern, name))
        if t is OrPattReq:
            return self.or_patt_req(v, s)
        if t is Items:
            hi = len(v) if s.hi == INF else min(int(s.hi), len(v))
            return all(self.check(v[i - 1], s.schema) for i in range(max(s.lo, 1), hi + 1))
        if t is Ite:
            n = len(s.prefix)
            return all(self.check(x, s.prefix[i] if i < n else s.tail) for i, x in enumerate(v))
        if t is Contains:
            c = sum(1 for x in v if self.check(x, s.schema))
            return s.lo <= c <= s.hi
        if t is UniqueItems:
            return _unique(v)
        if t is RepeatedItems:
            return not _unique(v)
        raise AssertionError(t)

    def or_patt_req(self, v, s: OrPattReq) -> bool:
        return any(
            rx.matches(r, name) and self.check(x, sch)
            for r, sch in s.alternatives
            for name, x in v.items()
        )

    def prepared_object(self, v, s: PreparedObject) -> bool:
        if not s.lo <= len(v) <= s.hi:
            return False
        for name, x in v.items():
            for r, sch in s.constraining:
                if rx.matches(r, name) and not self.check(x, sch):
                    return False
        return all(self.or_patt_req(v, q) for q in s.requiring)

    def prepared_array(self, v, s: PreparedArray) -> bool:
        if not s.lo <= len(v) <= s.hi:
            return False
        if not self.check(v, Ite(s.prefix, s.tail)):
            return False
        return all(self.check(v, Contains(lo, hi, sch)) for lo, hi, sch in s.contains)


def _unique(v) -> bool:
    return not any(json_equal(v[i], v[j]) for i in range(len(v)) for j in range(i))


def validate(value, schema, env: Environment | None = None) -> bool:
    """Does value satisfy schema?  ``schema`` may be an Environment, meaning
    its root variable."""
    if isinstance(schema, Environment):
        env, schema = schema, Ref(schema.root)
    return Validator(env).check(value, schema)


# printing

def _num(q) -> str:
    if q == INF:
        return "∞"
    if q == -INF:
        return "-∞"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else str(q)


def _pat(r) -> str:
    return rx.to_text(r)


def show(s: Schema) -> str:
    t = type(s)
    if t is Top:
        return "t"
    if t is Bottom:
        return "f"
    if t is Ref:
        return s.name
    if t is IsBoolValue:
        return f"isBoolValue({'true' if s.value else 'false'})"
    if t is PatternAssert:
        return f"pattern({_pat(s.pattern)})"
    if t is NotPattern:
        return f"notPattern({_pat(s.pattern)})"
    if t in (Betw, XBetw):
        name = "betw" if t is Betw else "xBetw"
        return f"{name}[{_num(s.lo)},{_num(s.hi)}]"
    if t is MulOf:
        return f"mulOf({_num(s.n)})"
    if t is NotMulOf:
        return f"notMulOf({_num(s.n)})"
    if t is Pro:
        return f"pro[{_num(s.lo)},{_num(s.hi)}]"
    if t is Prop:
        return f"{_pat(s.pattern)} : {_wrap(s.schema)}"
    if t is PattReq:
        return f"pattReq({_pat(s.pattern)} : {show(s.schema)})"
    if t is OrPattReq:
        return "orPattReq(" + ", ".join(f"{_pat(r)} : {show(x)}" for r, x in s.alternatives) + ")"
    if t is Items:
        return f"{_num(s.lo)}-{_num(s.hi)} : {_wrap(s.schema)}"
    if t is Ite:
        return "ite([" + ", ".join(show(x) for x in s.prefix) + f"]; {show(s.tail)})"
    if t is Contains:
        return f"#[{_num(s.lo)},{_num(s.hi)}] {_wrap(s.schema)}"
    if t is UniqueItems:
        return "uniqueItems"
    if t is RepeatedItems:
        return "repeatedItems"
    if t is TypeAssert:
        return f"type({s.kind.value})"
    if t is And:
        return " ∧ ".join(_wrap(x) for x in s.items) if s.items else "t"
    if t is Or:
        return " ∨ ".join(_wrap(x) for x in s.items) if s.items else "f"
    if t is Not:
        return "¬" + _wrap(s.item)
    if t is Group:
        return "{" + ", ".join([s.kind.value] + [show(x) for x in s.items]) + "}"
    if t is PreparedObject:
        parts = ["Obj", f"pro[{_num(s.lo)},{_num(s.hi)}]"]
        parts += [f"{_pat(r)} : {show(x)}" for r, x in s.constraining]
        parts += [show(q) for q in s.requiring]
        return "{" + ", ".join(parts) + "}"
    if t is PreparedArray:
        parts = ["Arr", f"size[{_num(s.lo)},{_num(s.hi)}]"]
        parts.append("ite([" + ", ".join(show(x) for x in s.prefix) + f"]; {show(s.tail)})")
        parts += [f"#[{_num(lo)},{_num(hi)}] {show(x)}" for lo, hi, x in s.contains]
        return "{" + ", ".join(parts) + "}"
    return repr(s)


def _wrap(s: Schema) -> str:
    text = show(s)
    if isinstance(s, (And, Or)) and len(s.items) > 1 or isinstance(s, (Prop, Items)):
        return "(" + text + ")"
    return text


def show_env(env: Environment) -> str:
    lines = [f"root {env.root}"]
    for name, body in env.defs.items():
        lines.append(f"def {name} = {show(body)}")
    return "\n".join(lines)
