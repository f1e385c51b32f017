"""Pattern parsing and printing.

Two dialects are read here:

* JSON Schema patterns, a subset of ECMA-262 regular expressions with
  search semantics (a pattern matches a string if it matches a substring
  of it).  Anchors ``^`` and ``$`` are accepted at the start and end of a
  top-level alternative, possibly through a group that spans the whole
  alternative.
* The extended whole-string syntax used for printing terms.  It adds
  ``&`` (intersection), a ``~`` prefix (complement), ``[]`` (the empty
  language) and ``()`` (the empty word), and has no anchors.
"""

from __future__ import annotations

from . import terms as T


class PatternDialectError(ValueError):
    """The pattern uses a construct outside the supported ECMA subset."""


class AlphabetError(ValueError):
    """The pattern or string mentions a character outside printable ASCII."""


DIGIT = T.range_mask("0", "9")
WORD = T.range_mask("a", "z") | T.range_mask("A", "Z") | DIGIT | T.mask_of("_")
# Whitespace beyond the space character is not printable; it lives in OTHER.
SPACE = T.mask_of(" ") | 1 << T.OTHER

_CLASS_ESCAPES = {
    "d": DIGIT,
    "D": T.FULL & ~DIGIT,
    "w": WORD,
    "W": T.FULL & ~WORD,
    "s": SPACE,
    "S": T.FULL & ~SPACE,
}
_CONTROL_ESCAPES = "nrtfv0"


def _printable(c: str, where: str) -> int:
    if not (0x20 <= ord(c) <= 0x7E):
        raise AlphabetError(f"character {c!r} in {where} is outside printable ASCII")
    return T.char_index(c)


class _Parser:
    def __init__(self, src: str, extended: bool):
        self.src = src
        self.pos = 0
        self.extended = extended

    def error(self, msg, cls=PatternDialectError):
        raise cls(f"{msg} at offset {self.pos} in pattern {self.src!r}")

    def peek(self):
        return self.src[self.pos] if self.pos < len(self.src) else None

    def take(self):
        c = self.src[self.pos]
        self.pos += 1
        return c

    # The parse tree uses tuples: ("alt", [...]), ("seq", [...]),
    # ("set", mask), ("rep", node, lo, hi), ("group", node), ("bol",),
    # ("eol",), ("and", [...]), ("not", node).

    def parse(self):
        node = self.disjunction()
        if self.pos != len(self.src):
            self.error("unbalanced parenthesis")
        return node

    def disjunction(self):
        alts = [self.conjunction()]
        while self.peek() == "|":
            self.take()
            alts.append(self.conjunction())
        return alts[0] if len(alts) == 1 else ("alt", alts)

    def conjunction(self):
        parts = [self.sequence()]
        while self.extended and self.peek() == "&":
            self.take()
            parts.append(self.sequence())
        return parts[0] if len(parts) == 1 else ("and", parts)

    def sequence(self):
        items = []
        while True:
            c = self.peek()
            if c is None or c in "|)" or (self.extended and c == "&"):
                break
            items.append(self.term())
        return ("seq", items)

    def term(self):
        c = self.peek()
        if not self.extended and c in "^$":
            self.take()
            return ("bol",) if c == "^" else ("eol",)
        if self.extended and c == "~":
            self.take()
            return ("not", self.term())
        atom = self.atom()
        return self.quantified(atom)

    def quantified(self, atom):
        while True:
            c = self.peek()
            if c == "*":
                lo, hi = 0, None
                self.take()
            elif c == "+":
                lo, hi = 1, None
                self.take()
            elif c == "?":
                lo, hi = 0, 1
                self.take()
            elif c == "{":
                bounds = self.braces()
                if bounds is None:
                    return atom
                lo, hi = bounds
            else:
                return atom
            if not self.extended and self.peek() == "?":
                self.take()  # lazy quantifiers match the same language
            if atom[0] in ("bol", "eol"):
                self.error("quantified anchor")
            atom = ("rep", atom, lo, hi)
            if not self.extended:
                return atom

    def braces(self):
        start = self.pos
        j = self.src.find("}", start)
        if j < 0:
            return None
        body = self.src[start + 1 : j]
        parts = body.split(",")
        try:
            if len(parts) == 1:
                lo = hi = int(parts[0])
            elif len(parts) == 2:
                lo = int(parts[0])
                hi = int(parts[1]) if parts[1] else None
            else:
                return None
        except ValueError:
            return None
        if not all(p.isdigit() for p in parts if p) or not parts[0]:
            return None
        if hi is not None and hi < lo:
            self.error("numbers out of order in {} quantifier")
        self.pos = j + 1
        return lo, hi

    def atom(self):
        c = self.take()
        if c == ".":
            return ("set", T.FULL)
        if c == "(":
            return self.group()
        if c == "[":
            return ("set", self.char_class())
        if c == "\\":
            return ("set", self.escape(in_class=False))
        if c in "*+?":
            self.error("nothing to repeat")
        if c == "{" and not self.extended:
            # ECMA annex B reads a lone brace as a literal
            return ("set", 1 << _printable(c, "pattern"))
        if self.extended and c in "{}]":
            self.error(f"unexpected {c!r}")
        return ("set", 1 << _printable(c, "pattern"))

    def group(self):
        if self.src.startswith("?:", self.pos):
            self.pos += 2
        elif self.src.startswith("?<", self.pos) and not self.src.startswith(("?<=", "?<!"), self.pos):
            end = self.src.find(">", self.pos)
            if end < 0:
                self.error("unterminated group name")
            self.pos = end + 1
        elif self.peek() == "?":
            self.error("lookaround assertions are not supported")
        if self.extended and self.peek() == ")":
            self.take()
            return ("seq", [])
        inner = self.disjunction()
        if self.peek() != ")":
            self.error("missing )")
        self.take()
        return ("group", inner)

    def char_class(self):
        negate = False
        if self.peek() == "^":
            self.take()
            negate = True
        mask = 0
        while True:
            c = self.peek()
            if c is None:
                self.error("unterminated character class")
            if c == "]":
                self.take()
                break
            lo_mask, lo_char = self.class_atom()
            if self.peek() == "-" and self.src[self.pos + 1 : self.pos + 2] not in ("]", ""):
                self.take()
                hi_mask, hi_char = self.class_atom()
                if lo_char is None or hi_char is None:
                    if self.extended:
                        self.error("class escape in range")
                    # ECMA annex B: a class escape makes the dash literal
                    mask |= lo_mask | hi_mask | T.mask_of("-")
                    continue
                if ord(hi_char) < ord(lo_char):
                    self.error("range out of order in character class")
                mask |= T.range_mask(lo_char, hi_char)
            else:
                mask |= lo_mask
        return T.FULL & ~mask if negate else mask

    def class_atom(self):
        """Returns (mask, char) where char is None for multi-symbol escapes."""
        c = self.take()
        if c == "\\":
            e = self.peek()
            if e in _CLASS_ESCAPES:
                self.take()
                return _CLASS_ESCAPES[e], None
            m = self.escape(in_class=True)
            return m, T.index_char(T.lowest_symbol(m))
        return 1 << _printable(c, "character class"), c

    def escape(self, in_class):
        if self.peek() is None:
            self.error("trailing backslash")
        e = self.take()
        if e in _CLASS_ESCAPES:
            return _CLASS_ESCAPES[e]
        if e in _CONTROL_ESCAPES or e == "c":
            self.error(f"escape \\{e} denotes a character outside printable ASCII", AlphabetError)
        if e == "b" and not in_class or e == "B":
            self.error("word-boundary assertions are not supported")
        if e == "b":
            self.error("escape \\b denotes a character outside printable ASCII", AlphabetError)
        if e.isdigit():
            self.error("backreferences are not supported")
        if e in "ux":
            width = 4 if e == "u" else 2
            digits = self.src[self.pos : self.pos + width]
            if len(digits) != width or any(ch not in "0123456789abcdefABCDEF" for ch in digits):
                if self.extended:
                    self.error("malformed hex escape")
                return 1 << _printable(e, "pattern")
            self.pos += width
            return 1 << _printable(chr(int(digits, 16)), "pattern")
        if e == "o" and self.extended:
            return 1 << T.OTHER
        if e.isalnum() and not self.extended:
            self.error(f"unknown escape \\{e}")
        return 1 << _printable(e, "pattern")


def _to_term(node) -> T.Regex:
    kind = node[0]
    if kind == "set":
        return T.chars(node[1])
    if kind == "seq":
        return T.cat(*(_to_term(n) for n in node[1]))
    if kind == "alt":
        return T.union(*(_to_term(n) for n in node[1]))
    if kind == "and":
        return T.inter(*(_to_term(n) for n in node[1]))
    if kind == "not":
        return T.compl(_to_term(node[1]))
    if kind == "group":
        return _to_term(node[1])
    if kind == "rep":
        return T.repeat(_to_term(node[1]), node[2], node[3])
    raise PatternDialectError("anchors are only supported at the start or end of a branch")


def _branches(node):
    if node[0] == "alt":
        return node[1]
    return [node]


def _search_language(node, anchored_start=False, anchored_end=False) -> T.Regex:
    """Language of strings containing a match of ``node``."""
    out = []
    for branch in _branches(node):
        items = list(branch[1]) if branch[0] == "seq" else [branch]
        start, end = anchored_start, anchored_end
        while items and items[0][0] == "bol":
            items.pop(0)
            start = True
        while items and items[-1][0] == "eol":
            items.pop()
            end = True
        if len(items) == 1 and items[0][0] == "group" and _has_anchor(items[0]):
            out.append(_search_language(items[0][1], start, end))
            continue
        if any(_has_anchor(i) for i in items):
            if any(i[0] in ("bol", "eol") for i in items) and _only_anchors_kill(items):
                continue
            raise PatternDialectError("anchors are only supported at the start or end of a branch")
        body = T.cat(*(_to_term(i) for i in items))
        out.append(T.cat(T.EPS if start else T.UNIVERSAL, body, T.EPS if end else T.UNIVERSAL))
    return T.union(*out)


def _only_anchors_kill(items):
    # "a^b" can never match: a ^ after a consumed character fails
    for idx, i in enumerate(items):
        if i[0] == "bol" and any(j[0] == "set" for j in items[:idx]):
            return True
        if i[0] == "eol" and any(j[0] == "set" for j in items[idx + 1 :]):
            return True
    return False


def _has_anchor(node):
    kind = node[0]
    if kind in ("bol", "eol"):
        return True
    if kind in ("seq", "alt", "and"):
        return any(_has_anchor(n) for n in node[1])
    if kind in ("group", "not", "rep"):
        return _has_anchor(node[1])
    return False


def parse_pattern(src: str) -> T.Regex:
    """Compile a JSON Schema ``pattern`` to the language of strings it matches."""
    return _search_language(_Parser(src, extended=False).parse())


def parse_extended(src: str) -> T.Regex:
    """Parse the whole-string extended syntax produced by :func:`to_text`."""
    return _to_term(_Parser(src, extended=True).parse())


# printing

_SPECIAL = set("\\^$.|?*+()[]{}&~/")


def _char_text(i: int) -> str:
    if i == T.OTHER:
        return "\\o"
    c = chr(i + 0x20)
    return "\\" + c if c in _SPECIAL else c


def _class_text(mask: int) -> str:
    if mask == T.FULL:
        return "."
    if mask == 0:
        return "[]"
    if mask & (mask - 1) == 0:
        return _char_text(T.lowest_symbol(mask))
    negate = bool(mask >> T.OTHER & 1)
    if negate:
        mask = T.PRINTABLE & ~mask
    parts = []
    i = 0
    while i < T.OTHER:
        if mask >> i & 1:
            j = i
            while j + 1 < T.OTHER and mask >> (j + 1) & 1:
                j += 1
            lo, hi = _class_char(i), _class_char(j)
            if j == i:
                parts.append(lo)
            elif j == i + 1:
                parts.append(lo + hi)
            else:
                parts.append(lo + "-" + hi)
            i = j + 1
        else:
            i += 1
    return "[" + ("^" if negate else "") + "".join(parts) + "]"


def _class_char(i):
    c = chr(i + 0x20)
    return "\\" + c if c in "\\]^-[" else c


def _prec(r: T.Regex) -> int:
    if r.op == "alt" and T.EPS in r.args:
        return 3
    return {"alt": 0, "and": 1, "cat": 2}.get(r.op, 3)


def _wrap(r: T.Regex, need: int) -> str:
    s = to_text(r)
    return "(" + s + ")" if _prec(r) < need else s


def to_text(r: T.Regex) -> str:
    if r._text is not None:
        return r._text
    op = r.op
    if op == "chars":
        s = _class_text(r.args[0])
    elif op == "eps":
        s = "()"
    elif op == "cat":
        parts = []
        node = r
        while node.op == "cat":
            parts.append(node.args[0])
            node = node.args[1]
        parts.append(node)
        s = "".join(_wrap(p, 3) for p in parts)
    elif op == "alt":
        rest = [a for a in r.args if a is not T.EPS]
        if len(rest) < len(r.args):
            inner = T.union(*rest)
            s = _wrap(inner, 3) + "?"
        else:
            s = "|".join(_wrap(a, 1) for a in r.args)
    elif op == "and":
        s = "&".join(_wrap(a, 2) for a in r.args)
    elif op == "not":
        s = "~" + _wrap(r.args[0], 3)
    elif op == "star":
        s = _wrap(r.args[0], 3) + "*"
    else:
        raise AssertionError(op)
    r._text = s
    return s
