"""JSON encoding of schemas and environments.

Each node is an object with a ``"op"`` tag; patterns are written in the
extended regex syntax (``&`` intersection, ``~`` complement, ``\\o`` for
characters outside printable ASCII) and an absent bound is ``null``.

    {"root": "x", "defs": {"x": {...}}, "complement": {"x": "not_x"}}
"""

from __future__ import annotations

from fractions import Fraction

from . import regex as rx
from .algebra import (
    FALSE,
    INF,
    TRUE,
    And,
    Betw,
    Bottom,
    Contains,
    Environment,
    Group,
    IsBoolValue,
    Items,
    Ite,
    MulOf,
    Not,
    NotMulOf,
    NotPattern,
    Or,
    OrPattReq,
    PattReq,
    PatternAssert,
    PreparedArray,
    PreparedObject,
    Pro,
    Prop,
    Ref,
    RepeatedItems,
    SchemaError,
    Top,
    TypeAssert,
    UniqueItems,
    XBetw,
)
from .json_model import Kind, format_number, is_decimal


def _bound(q, absent=INF):
    # null is the unbounded side; an infinity on the other side is spelled out
    if q == absent:
        return None
    if q in (INF, -INF):
        return "inf" if q == INF else "-inf"
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return format_number(q) if is_decimal(q) else f"{q.numerator}/{q.denominator}"


def _unbound(v, default):
    if v is None:
        return default
    if v == "inf":
        return INF
    if v == "-inf":
        return -INF
    return Fraction(v)


def _count(v):
    return INF if v is None else int(v)


def _pat(r):
    return rx.to_text(r)


def dump_schema(s) -> dict:
    t = type(s)
    if t is Top:
        return {"op": "true"}
    if t is Bottom:
        return {"op": "false"}
    if t is Ref:
        return {"op": "ref", "name": s.name}
    if t is IsBoolValue:
        return {"op": "isBoolValue", "value": s.value}
    if t in (PatternAssert, NotPattern):
        return {"op": "pattern" if t is PatternAssert else "notPattern", "pattern": _pat(s.pattern)}
    if t in (Betw, XBetw):
        return {"op": "betw" if t is Betw else "xBetw", "min": _bound(s.lo, -INF), "max": _bound(s.hi)}
    if t in (MulOf, NotMulOf):
        return {"op": "mulOf" if t is MulOf else "notMulOf", "n": _bound(s.n)}
    if t is Pro:
        return {"op": "pro", "min": s.lo, "max": _bound(s.hi)}
    if t in (Prop, PattReq):
        return {"op": "prop" if t is Prop else "pattReq", "pattern": _pat(s.pattern), "schema": dump_schema(s.schema)}
    if t is OrPattReq:
        return {"op": "orPattReq", "alternatives": [[_pat(r), dump_schema(x)] for r, x in s.alternatives]}
    if t is Items:
        return {"op": "items", "min": s.lo, "max": _bound(s.hi), "schema": dump_schema(s.schema)}
    if t is Ite:
        return {"op": "ite", "prefix": [dump_schema(x) for x in s.prefix], "tail": dump_schema(s.tail)}
    if t is Contains:
        return {"op": "contains", "min": s.lo, "max": _bound(s.hi), "schema": dump_schema(s.schema)}
    if t is UniqueItems:
        return {"op": "uniqueItems"}
    if t is RepeatedItems:
        return {"op": "repeatedItems"}
    if t is TypeAssert:
        return {"op": "type", "kind": s.kind.value}
    if t in (And, Or):
        return {"op": "and" if t is And else "or", "items": [dump_schema(x) for x in s.items]}
    if t is Not:
        return {"op": "not", "item": dump_schema(s.item)}
    if t is Group:
        return {"op": "group", "kind": s.kind.value, "items": [dump_schema(x) for x in s.items]}
    if t is PreparedObject:
        return {
            "op": "preparedObject", "min": s.lo, "max": _bound(s.hi),
            "constraining": [[_pat(r), dump_schema(x)] for r, x in s.constraining],
            "requiring": [dump_schema(q) for q in s.requiring],
        }
    if t is PreparedArray:
        return {
            "op": "preparedArray", "min": s.lo, "max": _bound(s.hi),
            "prefix": [dump_schema(x) for x in s.prefix], "tail": dump_schema(s.tail),
            "contains": [[lo, _bound(hi), dump_schema(x)] for lo, hi, x in s.contains],
            "profiles": [[pos, sorted(inc), dump_schema(v)] for pos, inc, v in s.profiles],
        }
    raise TypeError(f"cannot encode {s!r}")


def load_schema_ir(d: dict):
    op = d.get("op")
    pat = lambda key="pattern": rx.parse_extended(d[key])  # noqa: E731
    sub = lambda key="schema": load_schema_ir(d[key])  # noqa: E731
    if op == "true":
        return TRUE
    if op == "false":
        return FALSE
    if op == "ref":
        return Ref(d["name"])
    if op == "isBoolValue":
        return IsBoolValue(bool(d["value"]))
    if op == "pattern":
        return PatternAssert(pat())
    if op == "notPattern":
        return NotPattern(pat())
    if op in ("betw", "xBetw"):
        cls = Betw if op == "betw" else XBetw
        return cls(_unbound(d.get("min"), -INF), _unbound(d.get("max"), INF))
    if op == "mulOf":
        return MulOf(Fraction(d["n"]))
    if op == "notMulOf":
        return NotMulOf(Fraction(d["n"]))
    if op == "pro":
        return Pro(int(d.get("min", 0)), _count(d.get("max")))
    if op == "prop":
        return Prop(pat(), sub())
    if op == "pattReq":
        return PattReq(pat(), sub())
    if op == "orPattReq":
        return OrPattReq(tuple((rx.parse_extended(r), load_schema_ir(x)) for r, x in d["alternatives"]))
    if op == "items":
        return Items(int(d["min"]), _count(d.get("max")), sub())
    if op == "ite":
        return Ite(tuple(load_schema_ir(x) for x in d["prefix"]), sub("tail"))
    if op == "contains":
        return Contains(int(d.get("min", 0)), _count(d.get("max")), sub())
    if op == "uniqueItems":
        return UniqueItems()
    if op == "repeatedItems":
        return RepeatedItems()
    if op == "type":
        return TypeAssert(Kind(d["kind"]))
    if op in ("and", "or"):
        items = tuple(load_schema_ir(x) for x in d["items"])
        return And(items) if op == "and" else Or(items)
    if op == "not":
        return Not(sub("item"))
    if op == "group":
        return Group(Kind(d["kind"]), tuple(load_schema_ir(x) for x in d["items"]))
    if op == "preparedObject":
        return PreparedObject(
            int(d["min"]), _count(d.get("max")),
            tuple((rx.parse_extended(r), load_schema_ir(x)) for r, x in d["constraining"]),
            tuple(load_schema_ir(q) for q in d["requiring"]),
        )
    if op == "preparedArray":
        return PreparedArray(
            tuple(load_schema_ir(x) for x in d["prefix"]), sub("tail"),
            tuple((int(lo), _count(hi), load_schema_ir(x)) for lo, hi, x in d["contains"]),
            int(d["min"]), _count(d.get("max")),
            tuple((int(pos), frozenset(inc), load_schema_ir(v)) for pos, inc, v in d["profiles"]),
        )
    raise SchemaError(f"unknown IR node {op!r}")


def dump_env(env: Environment) -> dict:
    return {
        "root": env.root,
        "defs": {name: dump_schema(body) for name, body in env.defs.items()},
        "complement": dict(env.complement),
    }


def load_env(d: dict) -> Environment:
    defs = {name: load_schema_ir(body) for name, body in d["defs"].items()}
    return Environment(defs, d["root"], dict(d.get("complement", {})))


# export as JSON Schema with one extension keyword per typed assertion

def _x(s, sub) -> dict:
    t = type(s)
    if t is IsBoolValue:
        return {"x-isBoolValue": s.value}
    if t is PatternAssert:
        return {"x-pattern": _pat(s.pattern)}
    if t is NotPattern:
        return {"x-notPattern": _pat(s.pattern)}
    if t is Betw:
        return {"x-betw": [_bound(s.lo, -INF), _bound(s.hi)]}
    if t is XBetw:
        return {"x-xBetw": [_bound(s.lo, -INF), _bound(s.hi)]}
    if t is MulOf:
        return {"x-mulOf": _bound(s.n)}
    if t is NotMulOf:
        return {"x-notMulOf": _bound(s.n)}
    if t is Pro:
        return {"x-pro": [s.lo, _bound(s.hi)]}
    if t is Prop:
        return {"x-prop": [[_pat(s.pattern), sub(s.schema)]]}
    if t is PattReq:
        return {"x-pattReq": [[_pat(s.pattern), sub(s.schema)]]}
    if t is Items:
        return sub(Ite((TRUE,) * (s.lo - 1) + ((s.schema,) * (int(s.hi) - s.lo + 1) if s.hi != INF else ()),
                       s.schema if s.hi == INF else TRUE))
    if t is Ite:
        return {"x-ite": {"prefix": [sub(x) for x in s.prefix], "tail": sub(s.tail)}}
    if t is Contains:
        return {"x-contains": [[s.lo, _bound(s.hi), sub(s.schema)]]}
    if t is UniqueItems:
        return {"x-uniqueItems": True}
    if t is RepeatedItems:
        return {"x-repeatedItems": True}
    return None


_TYPE_NAMES = {
    Kind.NULL: "null", Kind.BOOL: "boolean", Kind.NUM: "number",
    Kind.STR: "string", Kind.OBJ: "object", Kind.ARR: "array",
}


def export_schema(s):
    t = type(s)
    if t is Top:
        return True
    if t is Bottom:
        return False
    if t is Ref:
        return {"$ref": "#/definitions/" + s.name.replace("~", "~0").replace("/", "~1")}
    if t is TypeAssert:
        return {"type": _TYPE_NAMES[s.kind]}
    if t is And:
        return {"allOf": [export_schema(x) for x in s.items]}
    if t is Or:
        return {"anyOf": [export_schema(x) for x in s.items]}
    if t is Not:
        return {"not": export_schema(s.item)}
    if t is Group:
        return {"allOf": [{"type": _TYPE_NAMES[s.kind]}] + [export_schema(x) for x in s.items]}
    out = _x(s, export_schema)
    if out is None:
        raise TypeError(f"cannot export {s!r}")
    return out


def to_json_schema(env: Environment) -> dict:
    """A JSON Schema document for env; the root variable is the document
    root and every variable is a root definition."""
    doc = {"$ref": "#/definitions/" + env.root.replace("~", "~0").replace("/", "~1")}
    doc["definitions"] = {name: export_schema(body) for name, body in env.defs.items()}
    return doc


EXTENSION_KEYWORDS = {
    "x-isBoolValue", "x-pattern", "x-notPattern", "x-betw", "x-xBetw", "x-mulOf",
    "x-notMulOf", "x-pro", "x-prop", "x-pattReq", "x-ite", "x-contains",
    "x-uniqueItems", "x-repeatedItems",
}


def translate_extension(key, value, sub):
    """The algebra term for one extension keyword; ``sub`` translates
    nested schemas."""
    if key == "x-isBoolValue":
        return IsBoolValue(bool(value))
    if key == "x-pattern":
        return PatternAssert(rx.parse_extended(value))
    if key == "x-notPattern":
        return NotPattern(rx.parse_extended(value))
    if key in ("x-betw", "x-xBetw"):
        cls = Betw if key == "x-betw" else XBetw
        return cls(_unbound(value[0], -INF), _unbound(value[1], INF))
    if key == "x-mulOf":
        return MulOf(Fraction(value))
    if key == "x-notMulOf":
        return NotMulOf(Fraction(value))
    if key == "x-pro":
        return Pro(int(value[0]), _count(value[1]))
    if key in ("x-prop", "x-pattReq"):
        cls = Prop if key == "x-prop" else PattReq
        return And(tuple(cls(rx.parse_extended(r), sub(x)) for r, x in value))
    if key == "x-ite":
        return Ite(tuple(sub(x) for x in value.get("prefix", [])), sub(value.get("tail", True)))
    if key == "x-contains":
        return And(tuple(Contains(int(lo), _count(hi), sub(x)) for lo, hi, x in value))
    if key == "x-uniqueItems":
        return UniqueItems() if value else TRUE
    if key == "x-repeatedItems":
        return RepeatedItems() if value else TRUE
    raise SchemaError(f"unknown extension keyword {key!r}")
