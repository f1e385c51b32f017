import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schemalg import regex as rx

ascii_words = st.text(alphabet="abc.-x1", max_size=6)

# patterns whose ECMA and Python semantics coincide on ASCII
ORACLE_PATTERNS = [
    "a", "^a", "a$", "^a$", "ab|c", "^(ab)*$", "a+b?", "[a-c]{2}", "^[^a]b", "x\\d",
    "^.{0,2}$", "(a|b)c", "\\w+\\.", "^$", "a{2,}", "[.-]", "^(a|)b", "c\\.",
]


@settings(max_examples=100)
@given(st.sampled_from(ORACLE_PATTERNS), ascii_words)
def test_pattern_matches_python_re(pattern, word):
    assert rx.matches(rx.parse_pattern(pattern), word) == bool(re.search(pattern, word))


def test_patterns_are_unanchored_search():
    r = rx.parse_pattern("b")
    assert rx.matches(r, "abc")
    assert not rx.matches(r, "ac")


def test_anchors():
    r = rx.parse_pattern("^ab$")
    assert rx.matches(r, "ab")
    assert not rx.matches(r, "xab")
    assert rx.equivalent(r, rx.literal("ab"))


def test_non_ascii_characters_are_one_symbol():
    r = rx.parse_pattern("^.$")
    assert rx.matches(r, "é")
    assert not rx.matches(rx.parse_pattern("^a$"), "é")


def test_literal_rejects_non_ascii():
    with pytest.raises(rx.AlphabetError):
        rx.literal("é")


@pytest.mark.parametrize("src", ["(?=a)", "\\1", "a\\b", "\\p{L}"])
def test_unsupported_constructs(src):
    with pytest.raises(rx.PatternDialectError):
        rx.parse_pattern(src)


def test_complement_and_intersection():
    a = rx.parse_pattern("^a")
    not_a = rx.compl(a)
    assert rx.is_empty(rx.inter(a, not_a))
    assert rx.equivalent(rx.union(a, not_a), rx.UNIVERSAL)
    assert rx.matches(not_a, "")
    assert rx.is_subset(rx.literal("ab"), a)
    assert not rx.is_subset(a, rx.literal("ab"))


def test_trivial_intersection():
    O = rx.Overlap
    assert rx.trivial_intersection(rx.literal("a"), rx.literal("b")) is O.DISJOINT
    assert rx.trivial_intersection(rx.parse_pattern("^a$"), rx.literal("a")) is O.EQUIVALENT
    assert rx.trivial_intersection(rx.parse_pattern("a"), rx.parse_pattern("b")) is O.OVERLAPPING


def test_example_words_shortest_first():
    words = rx.example_words(rx.compile_regex(rx.parse_pattern("^a+$")), 3)
    assert words == ["a", "aa", "aaa"]
    assert rx.shortest_word(rx.compile_regex(rx.EMPTY)) is None
    assert rx.example_words(rx.compile_regex(rx.literal("a")), 3) == ["a"]


def test_example_words_avoid():
    dfa = rx.compile_regex(rx.length_between(1, 1))
    got = rx.example_words(dfa, 2, avoid={"a"})
    assert "a" not in got and len(got) == 2


def test_minimal_dfa_is_canonical():
    a = rx.compile_regex(rx.parse_pattern("^(a|b)*$"))
    b = rx.compile_regex(rx.compl(rx.parse_pattern("[^ab]")))
    assert a == b
    assert a.size == 2


def test_finiteness():
    assert rx.is_finite(rx.compile_regex(rx.parse_pattern("^a{1,3}$")))
    assert not rx.is_finite(rx.compile_regex(rx.parse_pattern("a")))


extended_sources = st.sampled_from(["a", "ab", "a|b", "~(a)", "a.*&.*b", "(ab)*", "\\o", "[^a]b.*", ""])


@given(extended_sources, ascii_words)
def test_text_round_trip(src, word):
    r = rx.parse_extended(src)
    back = rx.parse_extended(rx.to_text(r))
    assert rx.equivalent(r, back)
    assert rx.matches(r, word) == rx.matches(back, word)


@settings(max_examples=100)
@given(st.sampled_from(ORACLE_PATTERNS), st.sampled_from(ORACLE_PATTERNS), ascii_words)
def test_boolean_operations_pointwise(p, q, word):
    a, b = rx.parse_pattern(p), rx.parse_pattern(q)
    ma, mb = rx.matches(a, word), rx.matches(b, word)
    assert rx.matches(rx.inter(a, b), word) == (ma and mb)
    assert rx.matches(rx.union(a, b), word) == (ma or mb)
    assert rx.matches(rx.compl(a), word) == (not ma)
    split = any(rx.matches(a, word[:i]) and rx.matches(b, word[i:]) for i in range(len(word) + 1))
    assert rx.matches(rx.cat(a, b), word) == split


@settings(max_examples=60)
@given(st.sampled_from(ORACLE_PATTERNS), st.sampled_from(ORACLE_PATTERNS))
def test_subset_agrees_with_sampling(p, q):
    a, b = rx.parse_pattern(p), rx.parse_pattern(q)
    if rx.is_subset(a, b):
        for w in rx.example_words(rx.compile_regex(a), 20):
            assert rx.matches(b, w)
    else:
        w = rx.shortest_word(rx.compile_regex(rx.inter(a, rx.compl(b))))
        assert rx.matches(a, w) and not rx.matches(b, w)
