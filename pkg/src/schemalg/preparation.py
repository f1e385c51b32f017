"""Preparation of object and array groups for witness generation.

An object group becomes a :class:`PreparedObject`: member names are split
into disjoint regions by the property patterns, and every requirement is
split into alternatives whose patterns and schemas interact in one of two
ways only (disjoint or identical).  This makes the choice of which member
satisfies which requirement a finite enumeration.

An array group becomes a :class:`PreparedArray` with a single merged ite,
size bounds, the remaining contains constraints and, for every position
class and every set of contains constraints, a variable for the elements
satisfying exactly that combination.
"""

from __future__ import annotations

from . import regex as rx
from .algebra import (
    FALSE,
    INF,
    TRUE,
    Bottom,
    Contains,
    Group,
    Ite,
    OrPattReq,
    PattReq,
    PreparedArray,
    PreparedObject,
    Pro,
    Prop,
    Ref,
    RepeatedItems,
    SchemaError,
    Top,
    UniqueItems,
)
from .json_model import Kind
from .normalizer import BudgetExceeded, merge_ites

MAX_PROFILES = 4096


class UnsupportedUniqueness(SchemaError):
    """Witness generation does not handle uniqueItems / repeatedItems."""


def refine(pieces, pattern):
    """Split each (regex, tag) piece along pattern; tags collect True/False."""
    out = []
    for r, tags in pieces:
        inside = rx.inter(r, pattern)
        outside = rx.inter(r, rx.compl(pattern))
        if not rx.is_empty(inside):
            out.append((inside, tags + (True,)))
        if not rx.is_empty(outside):
            out.append((outside, tags + (False,)))
    return out


def prepare_object(group: Group, factory) -> PreparedObject | Bottom:
    lo, hi = 0, INF
    props, reqs = [], []
    for s in group.items:
        if isinstance(s, Pro):
            lo, hi = max(lo, s.lo), min(hi, s.hi)
        elif isinstance(s, Prop):
            props.append((s.pattern, s.schema))
        elif isinstance(s, PattReq):
            reqs.append((s.pattern, s.schema))
        else:
            raise SchemaError(f"unexpected object assertion {s!r}")
    if lo > hi:
        return FALSE

    regions = [(rx.UNIVERSAL, ())]
    for p, _ in props:
        regions = refine(regions, p)
    constraining = []
    for r, tags in regions:
        x = factory.conj([props[i][1] for i, inside in enumerate(tags) if inside])
        constraining.append((r, x))

    cells = []
    for index, (region, x) in enumerate(constraining):
        pieces = [(region, ())]
        for r, _ in reqs:
            pieces = refine(pieces, r)
        cells.extend((c, x, tags) for c, tags in pieces)

    requiring = []
    for j, (_, y) in enumerate(reqs):
        alternatives = []
        for c, x, tags in cells:
            if not tags[j]:
                continue
            variants = [[x, y]]
            for k, inside in enumerate(tags):
                if k == j or not inside:
                    continue
                yk = reqs[k][1]
                signs = [yk, factory.negate(yk)]
                variants = [v + [s] for v in variants for s in signs]
            for v in variants:
                sch = factory.conj(v)
                if sch != FALSE and (c, sch) not in alternatives:
                    alternatives.append((c, sch))
        if not alternatives:
            return FALSE
        q = OrPattReq(tuple(alternatives))
        if q not in requiring:
            requiring.append(q)
    return PreparedObject(lo, hi, tuple(constraining), tuple(requiring))


def check_object_invariants(g: PreparedObject, factory) -> dict:
    """Mechanical checks of the four preparation invariants.

    Returns a dict from invariant name to a list of violations (empty when
    the invariant holds)."""
    report = {"partition": [], "internalization": [], "internal splitting": [], "external splitting": []}
    pats = [r for r, _ in g.constraining]
    if not rx.is_empty(rx.compl(rx.union(*pats))):
        report["partition"].append("regions do not cover all names")
    for i in range(len(pats)):
        for j in range(i):
            if not rx.is_empty(rx.inter(pats[i], pats[j])):
                report["partition"].append(f"regions {j} and {i} overlap")

    def disjoint_schemas(a, b):
        if a == FALSE or b == FALSE:
            return True
        atoms_a, atoms_b = factory.atoms_of(a), factory.atoms_of(b)
        return any(factory.complement.get(v) in atoms_b for v in atoms_a)

    def split(a, b):
        (ra, sa), (rb, sb) = a, b
        rel = rx.trivial_intersection(ra, rb)
        if rel is rx.Overlap.OVERLAPPING:
            return False
        return rel is rx.Overlap.DISJOINT or disjoint_schemas(sa, sb)

    for q in g.requiring:
        for r, y in q.alternatives:
            for p, x in g.constraining:
                if rx.is_empty(rx.inter(r, p)):
                    continue
                if x == TRUE:
                    continue
                if not factory.atoms_of(x) <= factory.atoms_of(y):
                    report["internalization"].append(f"{rx.to_text(r)} : {y} lacks factor {x}")
        alts = q.alternatives
        for i in range(len(alts)):
            for j in range(i):
                if not split(alts[i], alts[j]):
                    report["internal splitting"].append(f"{alts[j]} / {alts[i]}")
    for a in range(len(g.requiring)):
        for b in range(a):
            for u in g.requiring[a].alternatives:
                for w in g.requiring[b].alternatives:
                    same = rx.equivalent(u[0], w[0]) and u[1] == w[1]
                    if not same and not split(u, w):
                        report["external splitting"].append(f"{w} / {u}")
    return report


def choice_sets(g: PreparedObject, budget: int = 1024) -> list:
    """Minimal sets of alternatives meeting every requirement.

    One alternative is picked per requirement; an alternative shared by
    several requirements serves them all, so sets that strictly contain
    another candidate set are dropped."""
    sets = [frozenset()]
    for q in g.requiring:
        nxt = []
        for chosen in sets:
            if any(a in chosen for a in q.alternatives):
                nxt.append(chosen)
            else:
                nxt.extend(chosen | {a} for a in q.alternatives)
        sets = list(dict.fromkeys(nxt))
        if len(sets) > budget:
            raise BudgetExceeded(f"more than {budget} ways to meet the requirements")
    minimal = [s for s in sets if not any(t < s for t in sets)]
    return sorted(minimal, key=len)


def prepare_array(group: Group, factory) -> PreparedArray | Bottom | Group:
    ites, contains = [], []
    lo, hi = 0, INF
    for s in group.items:
        if isinstance(s, (UniqueItems, RepeatedItems)):
            # left unprepared; witness generation refuses it
            return group
        if isinstance(s, Ite):
            ites.append(s)
        elif isinstance(s, Contains):
            if s.schema == TRUE:
                lo, hi = max(lo, s.lo), min(hi, s.hi)
            else:
                contains.append((s.lo, s.hi, s.schema))
        else:
            raise SchemaError(f"unexpected array assertion {s!r}")
    prefix, tail = merge_ites(ites)
    prefix = tuple(factory.var_for(x) for x in prefix)
    tail = factory.var_for(tail)
    if tail == FALSE:
        hi = min(hi, len(prefix))
    if lo > hi:
        return FALSE
    n, k = len(prefix), len(contains)
    if (n + 1) << k > MAX_PROFILES:
        raise BudgetExceeded(f"array group needs {(n + 1) << k} element profiles")
    profiles = []
    for pos in list(range(n)) + [-1]:
        base = prefix[pos] if pos >= 0 else tail
        for mask in range(1 << k):
            included = frozenset(i for i in range(k) if mask >> i & 1)
            parts = [base]
            for i, (_, chi, x) in enumerate(contains):
                if i in included:
                    parts.append(x)
                elif chi != INF:
                    parts.append(factory.negate(x))
            var = factory.conj(parts)
            if var != FALSE:
                profiles.append((pos, included, var))
    return PreparedArray(prefix, tail, tuple(contains), lo, hi, tuple(profiles))


def prepare_group(g, factory):
    if isinstance(g, Group):
        if g.kind is Kind.OBJ:
            return prepare_object(g, factory)
        if g.kind is Kind.ARR:
            return prepare_array(g, factory)
    return g


__all__ = [
    "MAX_PROFILES", "UnsupportedUniqueness", "check_object_invariants", "choice_sets",
    "prepare_array", "prepare_group", "prepare_object", "refine", "Ref", "Top",
]
