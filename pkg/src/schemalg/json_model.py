"""JSON values as plain Python data.

A JSON value is one of ``None``, ``bool``, a number, ``str``, ``list`` or
``dict``.  Numbers are exact: the parser produces :class:`fractions.Fraction`
for every numeric literal, so ``1`` and ``1.0`` are the same value.  Python
``int`` and ``float`` are accepted wherever a value is expected and are
converted on the fly (floats through their shortest ``repr``).

Python treats ``True == 1``; :func:`json_equal` does not.
"""

from __future__ import annotations

import json
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from typing import Any, Union

JsonValue = Union[None, bool, Fraction, int, float, str, list, dict]


class Kind(Enum):
    NULL = "Null"
    BOOL = "Bool"
    NUM = "Num"
    STR = "Str"
    OBJ = "Obj"
    ARR = "Arr"

    def __repr__(self):
        return self.value

    def __lt__(self, other):
        return KIND_ORDER.index(self) < KIND_ORDER.index(other)


KIND_ORDER = (Kind.NULL, Kind.BOOL, Kind.NUM, Kind.STR, Kind.OBJ, Kind.ARR)


class JsonSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DuplicateKeyError(ValueError):
    def __init__(self, name: str):
        super().__init__(f"duplicate object key {name!r}")
        self.name = name


def kind_of(value: Any) -> Kind:
    if value is None:
        return Kind.NULL
    if isinstance(value, bool):
        return Kind.BOOL
    if isinstance(value, (int, float, Fraction, Decimal)):
        return Kind.NUM
    if isinstance(value, str):
        return Kind.STR
    if isinstance(value, dict):
        return Kind.OBJ
    if isinstance(value, (list, tuple)):
        return Kind.ARR
    raise TypeError(f"not a JSON value: {value!r}")


def to_fraction(n) -> Fraction:
    if isinstance(n, Fraction):
        return n
    if isinstance(n, float):
        if n != n or n in (float("inf"), float("-inf")):
            raise ValueError("non-finite numbers are not JSON values")
        return Fraction(repr(n))
    return Fraction(n)


def json_equal(a: Any, b: Any) -> bool:
    ka, kb = kind_of(a), kind_of(b)
    if ka is not kb:
        return False
    if ka is Kind.NUM:
        return to_fraction(a) == to_fraction(b)
    if ka is Kind.ARR:
        return len(a) == len(b) and all(json_equal(x, y) for x, y in zip(a, b))
    if ka is Kind.OBJ:
        if a.keys() != b.keys():
            return False
        return all(json_equal(a[k], b[k]) for k in a)
    return a == b


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise DuplicateKeyError(k)
        out[k] = v
    return out


def _reject_constant(name):
    raise ValueError(f"{name} is not a JSON number")


def _exact(text: str) -> Fraction:
    return Fraction(Decimal(text))


def parse_json(text: str | bytes) -> Any:
    """Parse JSON text with exact numbers and duplicate-key rejection."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        return json.loads(
            text,
            parse_float=_exact,
            parse_int=_exact,
            parse_constant=_reject_constant,
            object_pairs_hook=_reject_duplicates,
        )
    except json.JSONDecodeError as exc:
        raise JsonSyntaxError(exc.msg, exc.pos) from None
    except ValueError as exc:
        if isinstance(exc, DuplicateKeyError):
            raise
        raise JsonSyntaxError(str(exc), 0) from None


def is_decimal(q: Fraction) -> bool:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def format_number(q) -> str:
    """Shortest exact decimal text for a terminating rational."""
    q = to_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    if not is_decimal(q):
        raise ValueError(f"{q} has no finite decimal expansion")
    digits = 0
    d = q.denominator
    while d != 1:
        d = d // 2 if d % 2 == 0 else d // 5
        digits += 1
    scaled = abs(q.numerator) * 10**digits // q.denominator
    whole, frac = divmod(scaled, 10**digits)
    frac_text = str(frac).rjust(digits, "0").rstrip("0")
    sign = "-" if q < 0 else ""
    return f"{sign}{whole}.{frac_text}"


def serialize_json(value: Any) -> str:
    """Deterministic compact text; member order is preserved."""
    k = kind_of(value)
    if k is Kind.NULL:
        return "null"
    if k is Kind.BOOL:
        return "true" if value else "false"
    if k is Kind.NUM:
        return format_number(value)
    if k is Kind.STR:
        return json.dumps(value)
    if k is Kind.ARR:
        return "[" + ",".join(serialize_json(v) for v in value) + "]"
    return "{" + ",".join(
        json.dumps(key) + ":" + serialize_json(v) for key, v in value.items()
    ) + "}"


def to_plain(value: Any) -> Any:
    """Convert to the json module's native types (ints and floats) for display."""
    k = kind_of(value)
    if k is Kind.NUM:
        q = to_fraction(value)
        return int(q) if q.denominator == 1 else float(q)
    if k is Kind.ARR:
        return [to_plain(v) for v in value]
    if k is Kind.OBJ:
        return {key: to_plain(v) for key, v in value.items()}
    return value


def from_plain(value: Any) -> Any:
    """Normalize numbers in a Python value to Fractions."""
    k = kind_of(value)
    if k is Kind.NUM:
        return to_fraction(value)
    if k is Kind.ARR:
        return [from_plain(v) for v in value]
    if k is Kind.OBJ:
        return {key: from_plain(v) for key, v in value.items()}
    return value
