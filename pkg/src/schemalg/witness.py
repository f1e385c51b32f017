"""Witness generation by passes over a prepared environment.

Every variable starts Open.  A pass evaluates each Open variable against the
states of the previous pass: a group yields a witness when all variables it
needs are Populated, fails (Empty) when it cannot be satisfied whatever the
Open variables turn out to be, and stays Open otherwise.  States only move
out of Open, so the passes reach a fixpoint; variables still Open there
denote the empty set, since every witness is a finite value built from
witnesses found in earlier passes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd

from . import regex as rx
from .algebra import (
    FALSE,
    INF,
    TRUE,
    And,
    Betw,
    Bottom,
    Environment,
    Group,
    IsBoolValue,
    MulOf,
    Not,
    NotMulOf,
    NotPattern,
    Or,
    PatternAssert,
    PreparedArray,
    PreparedObject,
    Ref,
    Top,
    XBetw,
    validate,
)
from .json_model import Kind
from .normalizer import BudgetExceeded, normalize
from .preparation import UnsupportedUniqueness, choice_sets

DEFAULT_BUDGET = 1024


class _Open:
    def __repr__(self):
        return "?"


class _Empty:
    def __repr__(self):
        return "f"


OPEN = _Open()
EMPTY = _Empty()


@dataclass(frozen=True)
class Populated:
    value: object

    def __repr__(self):
        return f"P({self.value!r})"


def is_populated(state) -> bool:
    return isinstance(state, Populated)


class MonotonicityError(AssertionError):
    pass


# base kinds

def _interval(items):
    """(lo, lo_open, hi, hi_open) of the intersected bounds."""
    lo, lo_open, hi, hi_open = -INF, False, INF, False
    for s in items:
        is_open = isinstance(s, XBetw)
        if not is_open and not isinstance(s, Betw):
            continue
        if s.lo > lo or (s.lo == lo and is_open):
            lo, lo_open = s.lo, is_open
        if s.hi < hi or (s.hi == hi and is_open):
            hi, hi_open = s.hi, is_open
    return lo, lo_open, hi, hi_open


def _k_range(step, lo, lo_open, hi, hi_open):
    if lo == -INF:
        kmin = -INF
    else:
        x = lo / step
        kmin = ceil(x)
        if lo_open and kmin == x:
            kmin += 1
    if hi == INF:
        kmax = INF
    else:
        x = hi / step
        kmax = floor(x)
        if hi_open and kmax == x:
            kmax -= 1
    return kmin, kmax


def _lcm_int(a, b):
    return a * b // gcd(a, b)


def _search_multiples(step, interval, forbidden, limit=100000):
    """Smallest-magnitude k·step in the interval that is not a multiple of
    any forbidden modulus, or None."""
    periods = [(step / m).denominator for m in forbidden]
    if any(d == 1 for d in periods):
        return None
    period = 1
    for d in periods:
        period = _lcm_int(period, d)
    kmin, kmax = _k_range(step, *interval)
    if kmin > kmax:
        return None
    center = min(max(0, kmin), kmax)
    reach = 2 * period + 3
    if reach > limit:
        raise BudgetExceeded(f"number search needs {reach} candidates")
    for i in range(reach):
        for k in ((center + i, center - i) if i else (center,)):
            if kmin <= k <= kmax and all((k % d) != 0 for d in periods):
                return k * step
    return None


def _decimal_steps():
    j = 0
    while True:
        yield Fraction(1, 10 ** j)
        yield Fraction(1, 2 * 10 ** j)
        j += 1


def generate_number(items):
    """A number satisfying betw/xBetw/mulOf/notMulOf items, or None."""
    interval = _interval(items)
    lo, lo_open, hi, hi_open = interval
    if lo > hi or (lo == hi and (lo_open or hi_open)):
        return None
    mul = None
    for s in items:
        if isinstance(s, MulOf):
            mul = s.n if mul is None else Fraction(
                _lcm_int(mul.numerator, s.n.numerator), gcd(mul.denominator, s.n.denominator))
    forbidden = [s.n for s in items if isinstance(s, NotMulOf)]
    if mul is not None:
        return _search_multiples(mul, interval, forbidden)
    if lo == hi:
        return lo if all((lo / m).denominator != 1 for m in forbidden) else None
    for i, step in enumerate(_decimal_steps()):
        found = _search_multiples(step, interval, forbidden)
        if found is not None:
            return found
        if i > 80:
            raise BudgetExceeded("no number found on the decimal grid")


def generate_string(items):
    pats = [s.pattern for s in items if isinstance(s, PatternAssert)]
    pats += [rx.compl(s.pattern) for s in items if isinstance(s, NotPattern)]
    return rx.shortest_word(rx.compile_regex(rx.inter(*pats)))


def generate_base(g: Group):
    """Witness state for a Null, Bool, Num or Str group."""
    if g.kind is Kind.NULL:
        return Populated(None)
    if g.kind is Kind.BOOL:
        values = {s.value for s in g.items if isinstance(s, IsBoolValue)}
        if len(values) > 1:
            return EMPTY
        return Populated(values.pop() if values else True)
    if g.kind is Kind.NUM:
        q = generate_number(g.items)
        return EMPTY if q is None else Populated(q)
    if g.kind is Kind.STR:
        w = generate_string(g.items)
        return EMPTY if w is None else Populated(w)
    raise UnsupportedUniqueness(
        "witness generation does not support uniqueItems/repeatedItems in reachable array groups"
    )


# structured kinds

def _state(s, states):
    if isinstance(s, Top):
        return Populated(None)
    if isinstance(s, Bottom):
        return EMPTY
    return states[s.name]


def _usable(s, states, optimistic):
    st = _state(s, states)
    return is_populated(st) or (optimistic and st is OPEN)


def _object_attempt(g: PreparedObject, chosen, states, optimistic):
    """Try one choice set; a dict when it works, else None."""
    if len(chosen) > g.hi:
        return None
    if not all(_usable(y, states, optimistic) for _, y in chosen):
        return None
    members = {}
    by_pattern = {}
    for r, y in sorted(chosen, key=lambda a: (rx.to_text(a[0]), str(a[1]))):
        key = rx.compile_regex(r)
        by_pattern.setdefault(key, []).append(y)
    for dfa, ys in by_pattern.items():
        words = rx.example_words(dfa, len(ys))
        if len(words) < len(ys):
            return None
        for w, y in zip(words, ys):
            members[w] = y
    need = g.lo - len(members)
    for r, x in g.constraining:
        if need <= 0:
            break
        if not _usable(x, states, optimistic):
            continue
        words = rx.example_words(rx.compile_regex(r), need, avoid=members)
        for w in words:
            members[w] = x
        need -= len(words)
    if need > 0:
        return None
    return members


def generate_object(g: PreparedObject, states, budget=DEFAULT_BUDGET):
    sets = choice_sets(g, budget)
    blocked = False
    for chosen in sets:
        got = _object_attempt(g, chosen, states, optimistic=False)
        if got is not None:
            return Populated({name: _state(s, states).value for name, s in got.items()})
        if not blocked and _object_attempt(g, chosen, states, optimistic=True) is not None:
            blocked = True
    return OPEN if blocked else EMPTY


def _array_search(g: PreparedArray, states, optimistic, budget):
    """Profiles of a shortest array meeting the group, or None."""
    n = len(g.prefix)
    contains = g.contains
    caps = [lo if hi == INF else int(hi) for lo, hi, _ in contains]
    needs = [lo for lo, _, _ in contains]
    max_len = max(g.lo, n + sum(needs))
    if g.hi != INF:
        max_len = min(max_len, int(g.hi))
    by_pos = {}
    for pos, included, var in g.profiles:
        if _usable(var, states, optimistic):
            by_pos.setdefault(pos, []).append((sorted(included), var))
    start = tuple(0 for _ in contains)
    layer = {start: None}
    history = [layer]
    for length in range(max_len + 1):
        if length >= g.lo:
            for vec in layer:
                if all(c >= lo for c, lo in zip(vec, needs)):
                    return _rebuild(history, vec)
        if length == max_len:
            break
        nxt = {}
        for vec in layer:
            for included, var in by_pos.get(length if length < n else -1, ()):
                new = list(vec)
                ok = True
                for i in included:
                    new[i] += 1
                    if contains[i][1] != INF and new[i] > caps[i]:
                        ok = False
                        break
                    new[i] = min(new[i], max(caps[i], needs[i]))
                if not ok:
                    continue
                key = tuple(new)
                if key not in nxt:
                    nxt[key] = (vec, var)
        if len(nxt) > budget * 64:
            raise BudgetExceeded("array search exceeded its state budget")
        if not nxt:
            return None
        layer = nxt
        history.append(layer)
    return None


def _rebuild(history, vec):
    out = []
    for layer in reversed(history[1:]):
        prev, var = layer[vec]
        out.append(var)
        vec = prev
    out.reverse()
    return out


def generate_array(g: PreparedArray, states, budget=DEFAULT_BUDGET):
    found = _array_search(g, states, False, budget)
    if found is not None:
        return Populated([_state(v, states).value for v in found])
    if _array_search(g, states, True, budget) is not None:
        return OPEN
    return EMPTY


def generate_group(g, states, budget=DEFAULT_BUDGET):
    if isinstance(g, PreparedObject):
        return generate_object(g, states, budget)
    if isinstance(g, PreparedArray):
        return generate_array(g, states, budget)
    return generate_base(g)


def eval_variable(body: Or, states, budget=DEFAULT_BUDGET):
    """Populated if some group has a witness, Empty if all fail, else Open."""
    open_seen = False
    for g in body.items:
        st = generate_group(g, states, budget)
        if is_populated(st):
            return st
        if st is OPEN:
            open_seen = True
    return OPEN if open_seen else EMPTY


# the fixpoint

@dataclass
class Outcome:
    satisfiable: bool
    witness: object = None
    passes: int = 0
    states: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    env: Environment | None = None


def run_fixpoint(env: Environment, budget=DEFAULT_BUDGET, stop_at_root=True) -> Outcome:
    """Passes over a prepared environment until the root is Populated or
    nothing changes."""
    states = {name: OPEN for name in env.defs}
    trace = [dict(states)]
    passes = 0
    while True:
        passes += 1
        new = dict(states)
        for name, body in env.defs.items():
            if states[name] is OPEN:
                new[name] = eval_variable(body, states, budget)
        for name, old in states.items():
            if old is not OPEN and new[name] != old:
                raise MonotonicityError(f"{name} moved from {old!r} to {new[name]!r}")
        changed = new != states
        states = new
        trace.append(dict(states))
        root = states[env.root]
        if is_populated(root) and stop_at_root:
            return Outcome(True, root.value, passes, states, trace, env)
        if not changed:
            # at the fixpoint, whatever is still Open has no witness
            final = {k: EMPTY if v is OPEN else v for k, v in states.items()}
            root = final[env.root]
            if is_populated(root):
                return Outcome(True, root.value, passes, final, trace, env)
            return Outcome(False, None, passes, final, trace, env)
        if passes > len(env.defs) + 1:
            raise MonotonicityError("more passes than variables")


def witness(env: Environment, budget=DEFAULT_BUDGET, max_vars=20000) -> Outcome:
    """Normalize, prepare and search; the witness is checked against env."""
    prepared = normalize(env, max_vars=max_vars)
    out = run_fixpoint(prepared, budget)
    if out.satisfiable and not validate(out.witness, env):
        raise AssertionError(f"generated value {out.witness!r} does not validate")
    return out


def check_satisfiable(env: Environment, budget=DEFAULT_BUDGET) -> bool:
    return witness(env, budget).satisfiable


def _prefixed(env: Environment, prefix: str) -> dict:
    def rename(s):
        if isinstance(s, Ref):
            return Ref(prefix + s.name)
        return _rebuild_node(s, rename)

    return {prefix + name: rename(body) for name, body in env.defs.items()}


def _rebuild_node(s, f):
    from .algebra import map_args

    if isinstance(s, And):
        return And(tuple(f(x) for x in s.items))
    if isinstance(s, Or):
        return Or(tuple(f(x) for x in s.items))
    if isinstance(s, Not):
        return Not(f(s.item))
    if isinstance(s, Group):
        return Group(s.kind, tuple(f(x) for x in s.items))
    return map_args(s, f)


def difference_env(a: Environment, b: Environment) -> Environment:
    """An environment for the instances of a that are not instances of b."""
    defs = _prefixed(a, "a.")
    defs.update(_prefixed(b, "b."))
    root = "diff"
    defs[root] = And((Ref("a." + a.root), Not(Ref("b." + b.root))))
    return Environment(defs, root)


@dataclass
class Inclusion:
    included: bool
    counterexample: object = None


def check_inclusion(a: Environment, b: Environment, budget=DEFAULT_BUDGET) -> Inclusion:
    out = run_fixpoint(normalize(difference_env(a, b)), budget)
    if not out.satisfiable:
        return Inclusion(True)
    w = out.witness
    if not validate(w, a) or validate(w, b):
        raise AssertionError(f"counterexample {w!r} is not in the difference")
    return Inclusion(False, w)


@dataclass
class Equivalence:
    equivalent: bool
    counterexample: object = None
    direction: str | None = None


def check_equivalence(a: Environment, b: Environment, budget=DEFAULT_BUDGET) -> Equivalence:
    left = check_inclusion(a, b, budget)
    if not left.included:
        return Equivalence(False, left.counterexample, "left-not-in-right")
    right = check_inclusion(b, a, budget)
    if not right.included:
        return Equivalence(False, right.counterexample, "right-not-in-left")
    return Equivalence(True)


__all__ = [
    "DEFAULT_BUDGET", "EMPTY", "OPEN", "Populated", "Outcome", "Inclusion", "Equivalence",
    "check_equivalence", "check_inclusion", "check_satisfiable", "difference_env",
    "eval_variable", "generate_array", "generate_base", "generate_group", "generate_number",
    "generate_object", "generate_string", "run_fixpoint", "witness", "FALSE", "TRUE",
]
