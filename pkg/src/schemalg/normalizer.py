"""Normalization of not-free environments.

The phases, each a semantics-preserving rewrite:

* :func:`and_merge` folds the typed assertions of one conjunction;
* :func:`canonicalize` groups typed assertions per kind into
  :class:`Group` nodes;
* :func:`separate` moves every non-variable argument of a typed assertion
  into a fresh variable (with its complement);
* :func:`expand` substitutes variables that occur under boolean operators
  only;
* :func:`to_dnf` distributes conjunctions over disjunctions, leaving each
  body a disjunction of groups.

:func:`normalize` iterates them to a fixpoint and then prepares object and
array groups for witness generation.  Fresh variables are memoized by
canonical body and conjunctions by their set of atoms, so only finitely
many variables are ever created.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

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
    SchemaError,
    Top,
    TypeAssert,
    UniqueItems,
    UnguardedCycle,
    XBetw,
    assertion_kind,
    children,
    conj,
    disj,
    map_args,
    not_type,
    restrict,
    show,
)
from .json_model import KIND_ORDER, Kind
from .negation import complement_name, eliminate_not, has_not, items_as_ite, negate


class BudgetExceeded(RuntimeError):
    """A resource bound was hit; no verdict can be given."""


@lru_cache(maxsize=None)
def sort_key(s: Schema) -> str:
    return type(s).__name__ + ":" + show(s)


def _sorted(items):
    return tuple(sorted(items, key=sort_key))


def _lcm(a, b):
    # lcm of positive rationals p1/q1, p2/q2 is lcm(p1, p2) / gcd(q1, q2)
    from fractions import Fraction

    p1, q1 = a.numerator, a.denominator
    p2, q2 = b.numerator, b.denominator
    return Fraction(p1 * p2 // gcd(p1, p2), gcd(q1, q2))


def _is_multiple(a, b) -> bool:
    return (a / b).denominator == 1


def _easy_subset(s, t) -> bool:
    """A cheap sufficient condition for s ⊆ t."""
    return s == t or t == TRUE or s == FALSE


def _merge_num(items):
    lo, hi = -INF, INF
    xlo, xhi = -INF, INF
    mul = None
    notmul = []
    for s in items:
        if isinstance(s, Betw):
            lo, hi = max(lo, s.lo), min(hi, s.hi)
        elif isinstance(s, XBetw):
            xlo, xhi = max(xlo, s.lo), min(xhi, s.hi)
        elif isinstance(s, MulOf):
            mul = s.n if mul is None else _lcm(mul, s.n)
        elif isinstance(s, NotMulOf):
            if s.n not in notmul:
                notmul.append(s.n)
    if lo > hi or xlo >= xhi:
        return None
    # effective interval
    low, low_open = (xlo, True) if xlo >= lo else (lo, False)
    high, high_open = (xhi, True) if xhi <= hi else (hi, False)
    if low > high or (low == high and (low_open or high_open)):
        return None
    if mul is not None and any(_is_multiple(mul, m) for m in notmul):
        return None
    out = []
    if (lo, hi) != (-INF, INF):
        out.append(Betw(lo, hi))
    if (xlo, xhi) != (-INF, INF):
        out.append(XBetw(xlo, xhi))
    if mul is not None:
        out.append(MulOf(mul))
    out.extend(NotMulOf(m) for m in sorted(notmul))
    return out


def _merge_str(items):
    pats = [s.pattern for s in items if isinstance(s, PatternAssert)]
    pats += [rx.compl(s.pattern) for s in items if isinstance(s, NotPattern)]
    r = rx.inter(*pats)
    d = rx.compile_regex(r)
    if d.is_empty():
        return None
    if d.is_universal():
        return []
    return [PatternAssert(r)]


def _merge_bool(items):
    values = {s.value for s in items}
    if len(values) > 1:
        return None
    return [IsBoolValue(v) for v in values]


def _same_language(a, b):
    return rx.equivalent(a, b)


def _merge_obj(items):
    lo, hi = 0, INF
    props = []
    reqs = []
    others = []
    for s in items:
        if isinstance(s, Pro):
            lo, hi = max(lo, s.lo), min(hi, s.hi)
        elif isinstance(s, Prop):
            if rx.is_empty(s.pattern) or s.schema == TRUE:
                continue
            for i, (p, x) in enumerate(props):
                if _same_language(p, s.pattern):
                    props[i] = (p, conj(x, s.schema))
                    break
            else:
                props.append((s.pattern, s.schema))
        elif isinstance(s, PattReq):
            if s.schema == FALSE or rx.is_empty(s.pattern):
                return None
            if s not in reqs:
                reqs.append(s)
        else:
            others.append(s)
    if lo > hi:
        return None
    # props sharing a schema share one pattern
    merged = []
    for p, x in props:
        for i, (q, y) in enumerate(merged):
            if y == x:
                merged[i] = (rx.union(q, p), y)
                break
        else:
            merged.append((p, x))
    # a requirement implied by another one is redundant
    kept = []
    for i, a in enumerate(reqs):
        redundant = any(
            j != i and _easy_subset(b.schema, a.schema) and rx.is_subset(b.pattern, a.pattern)
            and not (j > i and _easy_subset(a.schema, b.schema) and rx.is_subset(a.pattern, b.pattern))
            for j, b in enumerate(reqs)
        )
        if not redundant:
            kept.append(a)
    out = []
    if (lo, hi) != (0, INF):
        out.append(Pro(lo, hi))
    out += [Prop(p, x) for p, x in merged]
    out += kept
    out += others
    return out


def merge_ites(ites):
    prefix, tail = (), TRUE
    for s in ites:
        n = max(len(prefix), len(s.prefix))
        a = prefix + (tail,) * (n - len(prefix))
        b = s.prefix + (s.tail,) * (n - len(s.prefix))
        prefix = tuple(conj(x, y) for x, y in zip(a, b))
        tail = conj(tail, s.tail)
    # trailing positions equal to the tail are redundant
    while prefix and prefix[-1] == tail:
        prefix = prefix[:-1]
    return prefix, tail


def _merge_arr(items):
    ites = []
    contains = []
    unique = repeated = False
    others = []
    for s in items:
        if isinstance(s, Items):
            s = items_as_ite(s)
        if isinstance(s, Ite):
            ites.append(s)
        elif isinstance(s, Contains):
            if s.lo > s.hi:
                return None
            if s.schema == FALSE:
                if s.lo > 0:
                    return None
                continue
            for i, (lo, hi, x) in enumerate(contains):
                if x == s.schema:
                    contains[i] = (max(lo, s.lo), min(hi, s.hi), x)
                    break
            else:
                contains.append((s.lo, s.hi, s.schema))
        elif isinstance(s, UniqueItems):
            unique = True
        elif isinstance(s, RepeatedItems):
            repeated = True
        else:
            others.append(s)
    if unique and repeated:
        return None
    out = []
    if ites:
        prefix, tail = merge_ites(ites)
        if prefix or tail != TRUE:
            out.append(Ite(prefix, tail))
    for lo, hi, x in contains:
        if lo > hi:
            return None
        if (lo, hi) != (0, INF):
            out.append(Contains(lo, hi, x))
    if unique:
        out.append(UniqueItems())
    if repeated:
        out.append(RepeatedItems())
    return out + others


_MERGERS = {
    Kind.NUM: _merge_num,
    Kind.STR: _merge_str,
    Kind.BOOL: _merge_bool,
    Kind.OBJ: _merge_obj,
    Kind.ARR: _merge_arr,
    Kind.NULL: lambda items: [],
}


def merge_kind(kind: Kind, items):
    """And-merge typed assertions of one kind; None when they clash."""
    return _MERGERS[kind](list(items))


def and_merge(items) -> list:
    """And-merge the operands of a conjunction.

    Typed assertions of the same kind are folded together; with a type
    assertion present, assertions of other kinds are dropped.  Returns
    ``[FALSE]`` when the conjunction is unsatisfiable.
    """
    flat = []
    for s in items:
        flat.extend(s.items if isinstance(s, And) else (s,))
    types = []
    typed = {k: [] for k in KIND_ORDER}
    rest = []
    for s in flat:
        if isinstance(s, Top):
            continue
        if isinstance(s, Bottom):
            return [FALSE]
        if isinstance(s, TypeAssert):
            if s.kind not in types:
                types.append(s.kind)
        elif isinstance(s, Group):
            if s.kind not in types:
                types.append(s.kind)
            typed[s.kind].extend(s.items)
        elif assertion_kind(s) is not None:
            typed[assertion_kind(s)].append(s)
        else:
            rest.append(s)
    if len(types) > 1:
        return [FALSE]
    if types:
        k = types[0]
        merged = merge_kind(k, typed[k])
        if merged is None:
            return [FALSE]
        return [TypeAssert(k)] + merged + rest
    out = []
    for k in KIND_ORDER:
        if typed[k]:
            merged = merge_kind(k, typed[k])
            out.extend(merged if merged is not None else [not_type(k)])
    return out + rest


def make_group(kind: Kind, items) -> Schema:
    merged = merge_kind(kind, items)
    if merged is None:
        return FALSE
    return Group(kind, _sorted(merged))


def canonicalize(s: Schema) -> Schema:
    """Split conjunctions into typed groups and boolean/variable parts.

    Typed assertions without a type become a disjunction of six groups, one
    per kind, each keeping the assertions of its own kind."""
    t = type(s)
    if t is Or:
        return disj(*(canonicalize(x) for x in s.items))
    if t is Group:
        return make_group(s.kind, s.items)
    if t in (Ref, Top, Bottom, PreparedObject, PreparedArray):
        return s
    items = s.items if t is And else (s,)
    flat = []
    for x in items:
        flat.extend(x.items if isinstance(x, And) else (x,))
    typed, rest = [], []
    for x in flat:
        if isinstance(x, (TypeAssert, Group)) or assertion_kind(x) is not None:
            typed.append(x)
        elif isinstance(x, Top):
            continue
        elif isinstance(x, Bottom):
            return FALSE
        else:
            rest.append(canonicalize(x))
    if not typed:
        return conj(*rest)
    kinds = {x.kind for x in typed if isinstance(x, (TypeAssert, Group))}
    if len(kinds) > 1:
        return FALSE
    if kinds:
        k = kinds.pop()
        body = []
        for x in typed:
            if isinstance(x, Group):
                body.extend(x.items)
            elif assertion_kind(x) is k:
                body.append(x)
        group = make_group(k, body)
    else:
        group = disj(*(
            make_group(k, [x for x in typed if assertion_kind(x) is k]) for k in KIND_ORDER
        ))
    return conj(group, *rest)


def six_groups() -> Schema:
    return Or(tuple(Group(k, ()) for k in KIND_ORDER))


class VarFactory:
    """Creates variables for separation and preparation, memoized so that
    equal bodies (or equal sets of conjoined atoms) share one variable."""

    def __init__(self, env: Environment, max_vars: int = 20000):
        self.complement = dict(env.complement)
        self.taken = set(env.defs)
        self.max_vars = max_vars
        self.by_body = {}
        self.by_atoms = {}
        self.atoms = {}
        self.new_defs = {}
        self.counter = 0

    def _fresh(self, base):
        while True:
            self.counter += 1
            name = f"{base}{self.counter}"
            if name not in self.taken:
                break
        self.taken.add(name)
        if len(self.taken) > self.max_vars:
            raise BudgetExceeded(f"more than {self.max_vars} variables")
        return name

    def _add(self, name, body):
        self.taken.add(name)
        self.new_defs[name] = body

    def take_new(self):
        out = self.new_defs
        self.new_defs = {}
        return out

    def complement_of(self, name: str) -> str:
        if name in self.complement:
            return self.complement[name]
        atoms = self.atoms.get(name)
        if atoms is None:
            raise SchemaError(f"variable {name!r} has no complement")
        new = complement_name(name, self.taken)
        self._add(new, disj(*(Ref(self.complement_of(a)) for a in sorted(atoms))))
        self.complement[name] = new
        self.complement[new] = name
        return new

    def negate(self, s: Schema) -> Schema:
        if s == TRUE:
            return FALSE
        if s == FALSE:
            return TRUE
        if isinstance(s, Ref):
            return Ref(self.complement_of(s.name))
        return negate(s, self.complement_of)

    def var_for(self, s: Schema) -> Schema:
        """A Ref, True or False equivalent to s."""
        if isinstance(s, (Ref, Top, Bottom)):
            return s
        if isinstance(s, And) and all(isinstance(x, (Ref, Top, Bottom)) for x in s.items):
            return self.conj(s.items)
        c = canonicalize(s)
        if isinstance(c, (Ref, Top, Bottom)):
            return c
        if isinstance(c, And) and all(isinstance(x, Ref) for x in c.items):
            return self.conj(c.items)
        hit = self.by_body.get(c)
        if hit is not None:
            return Ref(hit)
        name = self._fresh("v")
        self.by_body[c] = name
        self._add(name, c)
        neg = complement_name(name, self.taken)
        neg_body = canonicalize(negate(s, self.complement_of))
        self._add(neg, neg_body)
        self.by_body.setdefault(neg_body, neg)
        self.complement[name] = neg
        self.complement[neg] = name
        return Ref(name)

    def conj(self, schemas) -> Schema:
        """A variable for the conjunction of Refs/True/False."""
        atoms = set()
        for s in schemas:
            if isinstance(s, Bottom):
                return FALSE
            if isinstance(s, Top):
                continue
            atoms |= self.atoms.get(s.name, {s.name})
        if not atoms:
            return TRUE
        if any(self.complement.get(a) in atoms for a in atoms):
            return FALSE
        if len(atoms) == 1:
            return Ref(next(iter(atoms)))
        key = frozenset(atoms)
        hit = self.by_atoms.get(key)
        if hit is not None:
            return Ref(hit)
        label = "&".join(sorted(atoms))
        name = label if len(label) <= 40 and label not in self.taken else self._fresh("c")
        self.by_atoms[key] = name
        self.atoms[name] = key
        self._add(name, And(tuple(Ref(a) for a in sorted(atoms))))
        return Ref(name)

    def atoms_of(self, s: Schema) -> frozenset:
        if isinstance(s, Ref):
            return frozenset(self.atoms.get(s.name, {s.name}))
        return frozenset()


def _separate_schema(s: Schema, factory: VarFactory) -> Schema:
    t = type(s)
    if t is Or:
        return Or(tuple(_separate_schema(x, factory) for x in s.items))
    if t is And:
        return And(tuple(_separate_schema(x, factory) for x in s.items))
    if t is Group:
        return Group(s.kind, tuple(map_args(x, factory.var_for) for x in s.items))
    if assertion_kind(s) is not None:
        return map_args(s, factory.var_for)
    return s


def _merge_defs(env: Environment, defs: dict, factory: VarFactory) -> Environment:
    comp = {a: b for a, b in factory.complement.items() if a in defs and b in defs}
    return Environment(defs, env.root, comp)


def separate(env: Environment, factory: VarFactory | None = None) -> Environment:
    """Give every typed-assertion argument its own variable."""
    factory = factory or VarFactory(env)
    factory.complement.update(env.complement)
    factory.taken |= set(env.defs)
    defs = {}
    pending = list(env.defs.items())
    while pending:
        name, body = pending.pop(0)
        defs[name] = _separate_schema(body, factory)
        pending.extend(factory.take_new().items())
    return _merge_defs(env, defs, factory)


def expand(env: Environment) -> Environment:
    """Substitute variables occurring under boolean operators only."""
    memo = {}

    def body_of(name, stack):
        if name in memo:
            return memo[name]
        if name in stack:
            raise UnguardedCycle(stack[stack.index(name):] + [name])
        r = sub(env.defs[name], stack + [name])
        memo[name] = r
        return r

    def sub(s, stack):
        if isinstance(s, Ref):
            return body_of(s.name, stack)
        if isinstance(s, And):
            return conj(*(sub(x, stack) for x in s.items))
        if isinstance(s, Or):
            return disj(*(sub(x, stack) for x in s.items))
        return s

    defs = {name: body_of(name, []) for name in env.defs}
    return Environment(defs, env.root, dict(env.complement))


def merge_groups(a: Group, b: Group) -> Schema:
    if a.kind is not b.kind:
        return FALSE
    return make_group(a.kind, a.items + b.items)


def dnf_groups(s: Schema, limit: int = 4096) -> list:
    """s (expanded, canonical) as a list of groups, merged and deduplicated."""
    t = type(s)
    if t is Group:
        return [s]
    if t is Top:
        return list(six_groups().items)
    if t is Bottom:
        return []
    if t is Or:
        out = []
        for x in s.items:
            out.extend(dnf_groups(x, limit))
        return list(dict.fromkeys(out))
    if t is And:
        acc = None
        for x in s.items:
            part = dnf_groups(x, limit)
            if acc is None:
                acc = part
                continue
            nxt = []
            for g in acc:
                for h in part:
                    m = merge_groups(g, h)
                    if m != FALSE:
                        nxt.append(m)
            acc = list(dict.fromkeys(nxt))
            if len(acc) > limit:
                raise BudgetExceeded(f"disjunctive normal form exceeds {limit} groups")
        return acc or []
    if t in (PreparedObject, PreparedArray):
        raise SchemaError("prepared groups cannot be re-normalized")
    return dnf_groups(canonicalize(s), limit)


def to_dnf(env: Environment) -> Environment:
    """Every body becomes an Or of groups (possibly empty, meaning false)."""
    defs = {name: Or(tuple(dnf_groups(body))) for name, body in env.defs.items()}
    return Environment(defs, env.root, dict(env.complement))


def canonicalize_env(env: Environment) -> Environment:
    return Environment({n: canonicalize(b) for n, b in env.defs.items()}, env.root, dict(env.complement))


def is_separated(env: Environment) -> bool:
    for body in env.defs.values():
        if not isinstance(body, Or):
            return False
        for g in body.items:
            if not isinstance(g, Group):
                return False
            for item in g.items:
                if any(not isinstance(c, (Ref, Top, Bottom)) for c in children(item)):
                    return False
    return True


def normal_form(env: Environment, factory: VarFactory, max_rounds: int = 64, trace=None) -> Environment:
    """Loop separate, expand and DNF until every argument is a variable."""
    for _ in range(max_rounds):
        env = separate(env, factory)
        if trace is not None:
            trace.append(("separate", env))
        env = expand(env)
        if trace is not None:
            trace.append(("expand", env))
        env = to_dnf(env)
        if trace is not None:
            trace.append(("dnf", env))
        if is_separated(env):
            return env
    raise BudgetExceeded(f"normalization did not converge in {max_rounds} rounds")


def normalize(env: Environment, *, max_vars: int = 20000, trace=None) -> Environment:
    """Full pipeline: not-elimination, canonical DNF and group preparation.

    The result maps each reachable variable to an Or of prepared groups
    (PreparedObject, PreparedArray, or plain Group for the other kinds).
    """
    from .preparation import prepare_group

    if any(has_not(b) for b in env.defs.values()) or not env.complement:
        env = eliminate_not(env)
    if trace is not None:
        trace.append(("not-elimination", env))
    env = canonicalize_env(env)
    if trace is not None:
        trace.append(("canonicalize", env))
    factory = VarFactory(env, max_vars=max_vars)
    prepared = {}
    while True:
        env = normal_form(env, factory, trace=trace)
        todo = [n for n in env.defs if n not in prepared]
        if not todo:
            break
        for name in todo:
            groups = [prepare_group(g, factory) for g in env.defs[name].items]
            prepared[name] = Or(tuple(g for g in groups if g != FALSE))
        new = factory.take_new()
        if not new:
            continue
        defs = dict(env.defs)
        for name, body in new.items():
            defs[name] = canonicalize(body)
        env = Environment(defs, env.root, {a: b for a, b in factory.complement.items() if a in defs and b in defs})
    out = Environment(dict(prepared), env.root, dict(env.complement))
    out = restrict(out)
    if trace is not None:
        trace.append(("prepare", out))
    return out
