"""Negation elimination.

Every variable gets a complement variable (``not_x``), after which any
negation can be pushed down to the leaves: each assertion has a positive
or negative counterpart, references flip to their complements, and the
array operator ``ite`` gets the bitmap construction of
:func:`negate_items`.
"""

from __future__ import annotations

from itertools import product

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
    Schema,
    Top,
    TypeAssert,
    UniqueItems,
    XBetw,
    conj,
    disj,
    map_args,
    not_type,
)
from .json_model import Kind


def complement_name(name: str, taken) -> str:
    new = "not_" + name
    while new in taken:
        new = new + "'"
    return new


def not_complete(env: Environment) -> Environment:
    """Add ``not_x = ¬body(x)`` for every variable lacking a complement."""
    out = env.copy()
    for name in list(env.defs):
        if name in out.complement:
            continue
        new = complement_name(name, out.defs)
        out.defs[new] = Not(env.defs[name])
        out.complement[name] = new
        out.complement[new] = name
    return out


def items_as_ite(s: Items) -> Schema:
    """i-j:S as an ite over positions."""
    pad = (TRUE,) * (s.lo - 1)
    if s.hi == INF:
        return Ite(pad, s.schema)
    return Ite(pad + (s.schema,) * (int(s.hi) - s.lo + 1), TRUE)


def bitmaps(n: int):
    """All maps from positions 1..n to {0, 1}, as tuples."""
    return product((0, 1), repeat=n)


def negate_items(prefix, tail, complement) -> Schema:
    """¬ite(prefix; tail) without negation, as type(Arr) ∧ (N_1 ∨ … ∨ N_{n+1}).

    N_i (i ≤ n) says that position i exists and violates prefix[i].  The
    last disjunct says that some position past the prefix violates tail.
    """
    prefix = tuple(prefix)
    n = len(prefix)
    neg_tail = negate(tail, complement)
    disjuncts = []
    for i, s in enumerate(prefix, start=1):
        disjuncts.append(conj(
            Contains(i, INF, TRUE),
            Ite((TRUE,) * (i - 1) + (negate(s, complement),), TRUE),
        ))
    if n == 0:
        disjuncts.append(Contains(1, INF, neg_tail))
    elif tail == FALSE:
        disjuncts.append(Contains(n + 1, INF, TRUE))
    elif tail == TRUE:
        pass
    else:
        pos_tail = positive(tail, complement)
        # which head positions violate tail; then one more violation is in the tail
        for bm in bitmaps(n):
            head = tuple(neg_tail if b else pos_tail for b in bm)
            disjuncts.append(conj(Ite(head, TRUE), Contains(sum(bm) + 1, INF, neg_tail)))
    return conj(TypeAssert(Kind.ARR), disj(*disjuncts))


def _interval_complement(lo, hi, cls, typ):
    """Values outside [lo, hi] (or (lo, hi)), as the other bound form."""
    parts = []
    if lo != -INF:
        parts.append(cls(-INF, lo))
    if hi != INF:
        parts.append(cls(hi, INF))
    return conj(TypeAssert(typ), disj(*parts))


def negate(s: Schema, complement) -> Schema:
    """A Not-free schema equivalent to ¬s.

    ``complement`` maps each variable name to its complement's name (a dict
    or a callable)."""
    comp = complement if callable(complement) else complement.__getitem__
    t = type(s)
    if t is Top:
        return FALSE
    if t is Bottom:
        return TRUE
    if t is Not:
        return positive(s.item, comp)
    if t is And:
        return disj(*(negate(x, comp) for x in s.items))
    if t is Or:
        return conj(*(negate(x, comp) for x in s.items))
    if t is Ref:
        return Ref(comp(s.name))
    if t is TypeAssert:
        return not_type(s.kind)
    if t is IsBoolValue:
        return conj(TypeAssert(Kind.BOOL), IsBoolValue(not s.value))
    if t is PatternAssert:
        return conj(TypeAssert(Kind.STR), NotPattern(s.pattern))
    if t is NotPattern:
        return conj(TypeAssert(Kind.STR), PatternAssert(s.pattern))
    if t is Betw:
        return _interval_complement(s.lo, s.hi, XBetw, Kind.NUM)
    if t is XBetw:
        return _interval_complement(s.lo, s.hi, Betw, Kind.NUM)
    if t is MulOf:
        return conj(TypeAssert(Kind.NUM), NotMulOf(s.n))
    if t is NotMulOf:
        return conj(TypeAssert(Kind.NUM), MulOf(s.n))
    if t is Prop:
        return conj(TypeAssert(Kind.OBJ), PattReq(s.pattern, negate(s.schema, comp)))
    if t is PattReq:
        return conj(TypeAssert(Kind.OBJ), Prop(s.pattern, negate(s.schema, comp)))
    if t is OrPattReq:
        return conj(TypeAssert(Kind.OBJ), *(Prop(r, negate(x, comp)) for r, x in s.alternatives))
    if t is Pro:
        return _count_complement(s.lo, s.hi, Pro, Kind.OBJ)
    if t is Contains:
        return _count_complement(s.lo, s.hi, lambda i, j: Contains(i, j, positive(s.schema, comp)), Kind.ARR)
    if t is Items:
        return negate(items_as_ite(s), comp)
    if t is Ite:
        return negate_items(s.prefix, s.tail, comp)
    if t is UniqueItems:
        return conj(TypeAssert(Kind.ARR), RepeatedItems())
    if t is RepeatedItems:
        return conj(TypeAssert(Kind.ARR), UniqueItems())
    if t is Group:
        return disj(not_type(s.kind), *(negate(x, comp) for x in s.items))
    if t is PreparedObject:
        parts = [not_type(Kind.OBJ), negate(Pro(s.lo, s.hi), comp)]
        parts += [negate(Prop(r, x), comp) for r, x in s.constraining]
        parts += [negate(q, comp) for q in s.requiring]
        return disj(*parts)
    if t is PreparedArray:
        parts = [not_type(Kind.ARR), negate(Contains(s.lo, s.hi, TRUE), comp)]
        parts.append(negate(Ite(s.prefix, s.tail), comp))
        parts += [negate(Contains(lo, hi, x), comp) for lo, hi, x in s.contains]
        return disj(*parts)
    raise TypeError(f"cannot negate {s!r}")


def _count_complement(lo, hi, make, typ):
    parts = []
    if lo > 0:
        parts.append(make(0, lo - 1))
    if hi != INF:
        parts.append(make(int(hi) + 1, INF))
    return conj(TypeAssert(typ), disj(*parts))


def positive(s: Schema, complement) -> Schema:
    """Remove every Not from s, keeping its meaning."""
    comp = complement if callable(complement) else complement.__getitem__
    t = type(s)
    if t is Not:
        return negate(s.item, comp)
    if t is And:
        return conj(*(positive(x, comp) for x in s.items))
    if t is Or:
        return disj(*(positive(x, comp) for x in s.items))
    if t is Group:
        return Group(s.kind, tuple(positive(x, comp) for x in s.items))
    if t is PreparedObject:
        return PreparedObject(
            s.lo, s.hi,
            tuple((r, positive(x, comp)) for r, x in s.constraining),
            tuple(positive(q, comp) for q in s.requiring),
        )
    if t is PreparedArray:
        return PreparedArray(
            tuple(positive(x, comp) for x in s.prefix),
            positive(s.tail, comp),
            tuple((lo, hi, positive(x, comp)) for lo, hi, x in s.contains),
            s.lo, s.hi, s.profiles,
        )
    return map_args(s, lambda x: positive(x, comp))


def has_not(s: Schema) -> bool:
    from .algebra import children

    return isinstance(s, Not) or any(has_not(c) for c in children(s))


def eliminate_not(env: Environment) -> Environment:
    """Complete the environment and push every negation to the leaves."""
    env = not_complete(env)
    defs = {name: positive(body, env.complement) for name, body in env.defs.items()}
    return Environment(defs, env.root, dict(env.complement))
