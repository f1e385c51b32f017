"""Regular languages over printable ASCII with complement and intersection."""

from __future__ import annotations

from enum import Enum

from . import terms
from .automata import AutomatonTooLarge, Dfa, compile_regex, example_words, is_finite, shortest_word
from .syntax import AlphabetError, PatternDialectError, parse_extended, parse_pattern, to_text
from .terms import (
    ANY,
    EMPTY,
    EPS,
    UNIVERSAL,
    Regex,
    cat,
    compl,
    inter,
    literal_word,
    repeat,
    star,
    union,
)

__all__ = [
    "ANY", "EMPTY", "EPS", "UNIVERSAL", "AlphabetError", "AutomatonTooLarge",
    "Dfa", "Overlap", "PatternDialectError", "Regex", "cat", "compile_regex",
    "compl", "equivalent", "example_words", "inter", "is_empty", "is_finite",
    "is_subset", "literal", "literal_word", "matches", "parse_extended",
    "parse_pattern", "repeat", "shortest_word", "star", "to_text",
    "trivial_intersection", "union", "length_between",
]


class Overlap(Enum):
    DISJOINT = "disjoint"
    EQUIVALENT = "equivalent"
    OVERLAPPING = "overlapping"


def literal(s: str) -> Regex:
    """Exactly the one-word language {s}; s must be printable ASCII."""
    for c in s:
        if not (0x20 <= ord(c) <= 0x7E):
            raise AlphabetError(f"character {c!r} in {s!r} is outside printable ASCII")
    return literal_word(s)


def length_between(lo: int, hi: int | None) -> Regex:
    return repeat(ANY, lo, hi)


def matches(r: Regex, s: str) -> bool:
    return compile_regex(r).accepts(s)


def is_empty(r: Regex) -> bool:
    return compile_regex(r).is_empty()


def is_subset(a: Regex, b: Regex) -> bool:
    return is_empty(inter(a, compl(b)))


def equivalent(a: Regex, b: Regex) -> bool:
    return a is b or compile_regex(a) == compile_regex(b)


def trivial_intersection(a: Regex, b: Regex) -> Overlap:
    if equivalent(a, b):
        return Overlap.EQUIVALENT
    if is_empty(inter(a, b)):
        return Overlap.DISJOINT
    return Overlap.OVERLAPPING
