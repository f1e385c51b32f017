"""Hash-consed extended regular expressions and their Brzozowski derivatives.

The alphabet is printable ASCII (0x20-0x7E) plus one extra symbol, OTHER,
standing for every character outside that range.  Symbols are indexed
0..95 and character sets are bitmasks over those indexes.

Terms are interned: two structurally equal terms are the same object, and
the smart constructors normalize associativity, commutativity and
idempotence of union and intersection.  That keeps the set of derivatives
of any term finite.
"""

from __future__ import annotations

NSYM = 96
OTHER = 95
FULL = (1 << NSYM) - 1
PRINTABLE = FULL & ~(1 << OTHER)

# Witness strings write the OTHER symbol as DEL.
OTHER_CHAR = "\x7f"


def char_index(c: str) -> int:
    o = ord(c)
    if 0x20 <= o <= 0x7E:
        return o - 0x20
    return OTHER


def index_char(i: int) -> str:
    return OTHER_CHAR if i == OTHER else chr(i + 0x20)


def _preferred_order():
    first = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    order = [char_index(c) for c in first]
    order += [i for i in range(OTHER) if i not in order]
    order.append(OTHER)
    return tuple(order)


# Order in which example words are enumerated.
SYMBOL_ORDER = _preferred_order()


def mask_of(chars: str) -> int:
    m = 0
    for c in chars:
        m |= 1 << char_index(c)
    return m


def range_mask(lo: str, hi: str) -> int:
    a, b = char_index(lo), char_index(hi)
    if OTHER in (a, b):
        raise ValueError("range endpoints must be printable ASCII")
    m = 0
    for i in range(a, b + 1):
        m |= 1 << i
    return m


def lowest_symbol(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


_TABLE: dict = {}


class Regex:
    __slots__ = ("op", "args", "nullable", "_hash", "_derivs", "_classes", "_text", "_dfa")

    def __init__(self, op, args, nullable):
        self.op = op
        self.args = args
        self.nullable = nullable
        self._hash = hash((op, args))
        self._derivs = {}
        self._classes = None
        self._text = None
        self._dfa = None

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __repr__(self):
        from .syntax import to_text

        return f"Regex({to_text(self)!r})"

    def sort_key(self):
        from .syntax import to_text

        return to_text(self)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __reduce__(self):
        from .syntax import parse_extended, to_text

        return (parse_extended, (to_text(self),))


def _intern(op, args, nullable):
    key = (op, args)
    node = _TABLE.get(key)
    if node is None:
        node = Regex(op, args, nullable)
        _TABLE[key] = node
    return node


def chars(mask: int) -> Regex:
    return _intern("chars", (mask & FULL,), False)


EMPTY = chars(0)
EPS = _intern("eps", (), True)
ANY = chars(FULL)


def star(r: Regex) -> Regex:
    if r.op == "star":
        return r
    if r is EPS or r is EMPTY:
        return EPS
    return _intern("star", (r,), True)


UNIVERSAL = star(ANY)


def cat(*rs: Regex) -> Regex:
    out = EPS
    for r in reversed(rs):
        out = _cat2(r, out)
    return out


def _cat2(a: Regex, b: Regex) -> Regex:
    if a is EMPTY or b is EMPTY:
        return EMPTY
    if a is EPS:
        return b
    if b is EPS:
        return a
    if a.op == "cat":
        return _cat2(a.args[0], _cat2(a.args[1], b))
    return _intern("cat", (a, b), a.nullable and b.nullable)


def _sorted(items):
    return tuple(sorted(items, key=Regex.sort_key))


def union(*rs: Regex) -> Regex:
    items = set()
    mask = 0
    for r in rs:
        for s in (r.args if r.op == "alt" else (r,)):
            if s.op == "chars":
                mask |= s.args[0]
            else:
                items.add(s)
    if UNIVERSAL in items:
        return UNIVERSAL
    if mask:
        items.add(chars(mask))
    if not items:
        return EMPTY
    if len(items) == 1:
        return items.pop()
    return _intern("alt", _sorted(items), any(s.nullable for s in items))


def inter(*rs: Regex) -> Regex:
    items = set()
    mask = None
    for r in rs:
        for s in (r.args if r.op == "and" else (r,)):
            if s is EMPTY:
                return EMPTY
            if s is UNIVERSAL:
                continue
            if s.op == "chars":
                mask = s.args[0] if mask is None else mask & s.args[0]
            else:
                items.add(s)
    if mask is not None:
        if mask == 0:
            return EMPTY
        # a single-symbol language meets anything else in at most itself
        c = chars(mask)
        if not items:
            return c
        items.add(c)
    if not items:
        return UNIVERSAL
    if len(items) == 1:
        return items.pop()
    if EPS in items:
        return EPS if all(s.nullable for s in items) else EMPTY
    return _intern("and", _sorted(items), all(s.nullable for s in items))


def compl(r: Regex) -> Regex:
    if r.op == "not":
        return r.args[0]
    if r is EMPTY:
        return UNIVERSAL
    if r is UNIVERSAL:
        return EMPTY
    return _intern("not", (r,), not r.nullable)


def optional(r: Regex) -> Regex:
    return union(EPS, r)


def repeat(r: Regex, lo: int, hi: int | None) -> Regex:
    """r{lo,hi}; hi None means unbounded.  Optional tails are nested so
    the derivative closure stays linear in hi."""
    head = cat(*([r] * lo))
    if hi is None:
        return cat(head, star(r))
    if hi < lo:
        return EMPTY
    tail = EPS
    for _ in range(hi - lo):
        tail = optional(cat(r, tail))
    return cat(head, tail)


def literal_word(s: str) -> Regex:
    return cat(*(chars(1 << char_index(c)) for c in s))


def derivative(r: Regex, sym: int) -> Regex:
    d = r._derivs.get(sym)
    if d is not None:
        return d
    op = r.op
    if op == "chars":
        d = EPS if r.args[0] >> sym & 1 else EMPTY
    elif op == "eps":
        d = EMPTY
    elif op == "cat":
        a, b = r.args
        d = _cat2(derivative(a, sym), b)
        if a.nullable:
            d = union(d, derivative(b, sym))
    elif op == "alt":
        d = union(*(derivative(s, sym) for s in r.args))
    elif op == "and":
        d = inter(*(derivative(s, sym) for s in r.args))
    elif op == "not":
        d = compl(derivative(r.args[0], sym))
    elif op == "star":
        d = _cat2(derivative(r.args[0], sym), r)
    else:
        raise AssertionError(op)
    r._derivs[sym] = d
    return d


def _meet(p, q):
    out = []
    for a in p:
        for b in q:
            m = a & b
            if m:
                out.append(m)
    return tuple(out)


def classes(r: Regex) -> tuple:
    """A partition of the alphabet such that symbols in one block have the
    same derivative."""
    if r._classes is not None:
        return r._classes
    op = r.op
    if op == "chars":
        m = r.args[0]
        res = tuple(x for x in (m, FULL & ~m) if x)
    elif op == "eps":
        res = (FULL,)
    elif op == "cat":
        a, b = r.args
        res = classes(a)
        if a.nullable:
            res = _meet(res, classes(b))
    elif op in ("alt", "and"):
        res = (FULL,)
        for s in r.args:
            res = _meet(res, classes(s))
    else:
        res = classes(r.args[0])
    r._classes = res
    return res
