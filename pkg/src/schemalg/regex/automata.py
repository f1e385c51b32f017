"""Minimal deterministic automata built from derivative closures.

Every DFA produced here is complete, minimal and numbered in a canonical
breadth-first order, so two DFAs are equal exactly when their languages
are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import terms as T

MAX_STATES = 50000


class AutomatonTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Dfa:
    accepting: tuple
    # per state: ((mask, target), ...) with masks partitioning the alphabet
    transitions: tuple
    _table: list = field(default=None, compare=False, hash=False, repr=False)

    @property
    def size(self) -> int:
        return len(self.accepting)

    def table(self):
        if self._table is None:
            tab = []
            for row in self.transitions:
                targets = [0] * T.NSYM
                for mask, t in row:
                    m = mask
                    while m:
                        low = m & -m
                        targets[low.bit_length() - 1] = t
                        m ^= low
                tab.append(targets)
            object.__setattr__(self, "_table", tab)
        return self._table

    def run(self, word: str) -> int:
        tab = self.table()
        s = 0
        for c in word:
            o = ord(c)
            s = tab[s][o - 0x20 if 0x20 <= o <= 0x7E else T.OTHER]
        return s

    def accepts(self, word: str) -> bool:
        return self.accepting[self.run(word)]

    def is_empty(self) -> bool:
        return not any(self.accepting)

    def is_universal(self) -> bool:
        return all(self.accepting)


def _refine(masks):
    atoms = [T.FULL]
    for m in masks:
        nxt = []
        for a in atoms:
            x, y = a & m, a & ~m
            if x:
                nxt.append(x)
            if y:
                nxt.append(y)
        atoms = nxt
    return sorted(atoms, key=T.lowest_symbol)


def compile_regex(r: T.Regex) -> Dfa:
    if r._dfa is not None:
        return r._dfa
    states = [r]
    index = {r: 0}
    rows = []
    i = 0
    while i < len(states):
        s = states[i]
        row = []
        for m in T.classes(s):
            d = T.derivative(s, T.lowest_symbol(m))
            j = index.get(d)
            if j is None:
                j = index[d] = len(states)
                states.append(d)
                if len(states) > MAX_STATES:
                    raise AutomatonTooLarge(f"more than {MAX_STATES} automaton states")
            row.append((m, j))
        rows.append(row)
        i += 1
    dfa = _minimize([s.nullable for s in states], rows)
    r._dfa = dfa
    return dfa


def _minimize(accepting, rows) -> Dfa:
    masks = {m for row in rows for m, _ in row}
    atoms = _refine(masks)
    reps = [T.lowest_symbol(a) for a in atoms]
    table = []
    for row in rows:
        out = []
        for sym in reps:
            for m, t in row:
                if m >> sym & 1:
                    out.append(t)
                    break
        table.append(out)
    n = len(rows)
    block = [1 if a else 0 for a in accepting]
    nblocks = len(set(block))
    while True:
        sigs = {}
        new = [0] * n
        for s in range(n):
            key = (block[s], tuple(block[t] for t in table[s]))
            new[s] = sigs.setdefault(key, len(sigs))
        block = new
        if len(sigs) == nblocks:
            break
        nblocks = len(sigs)
    # canonical breadth-first numbering from the start block
    rep_of = {}
    for s in range(n):
        rep_of.setdefault(block[s], s)
    order = {block[0]: 0}
    queue = [block[0]]
    k = 0
    while k < len(queue):
        b = queue[k]
        k += 1
        for t in table[rep_of[b]]:
            tb = block[t]
            if tb not in order:
                order[tb] = len(queue)
                queue.append(tb)
    acc = []
    trans = []
    for b in queue:
        s = rep_of[b]
        acc.append(bool(accepting[s]))
        grouped = {}
        for atom, t in zip(atoms, table[s]):
            tgt = order[block[t]]
            grouped[tgt] = grouped.get(tgt, 0) | atom
        trans.append(tuple(sorted((m, t) for t, m in grouped.items())))
    return Dfa(tuple(acc), tuple(trans))


def live_states(dfa: Dfa) -> set:
    """States from which an accepting state is reachable."""
    preds = [set() for _ in range(dfa.size)]
    for s, row in enumerate(dfa.transitions):
        for _, t in row:
            preds[t].add(s)
    live = {s for s, a in enumerate(dfa.accepting) if a}
    stack = list(live)
    while stack:
        t = stack.pop()
        for s in preds[t]:
            if s not in live:
                live.add(s)
                stack.append(s)
    return live


def is_finite(dfa: Dfa) -> bool:
    live = live_states(dfa)
    # a cycle among live states reachable from the start means infinitely many words
    color = {}

    def visit(s):
        color[s] = 1
        for _, t in dfa.transitions[s]:
            if t not in live:
                continue
            c = color.get(t)
            if c == 1:
                return False
            if c is None and not visit(t):
                return False
        color[s] = 2
        return True

    return 0 not in live or visit(0)


def example_words(dfa: Dfa, k: int, avoid=()) -> list:
    """Up to k accepted words, shortest first and then in symbol order.
    Words in ``avoid`` are skipped."""
    if k <= 0 or dfa.is_empty():
        return []
    avoid = set(avoid)
    tab = dfa.table()
    n = dfa.size
    finite = is_finite(dfa)
    # counts[L][s]: number of accepted words of length L from state s
    counts = [[1 if a else 0 for a in dfa.accepting]]
    out = []

    def count(length):
        while len(counts) <= length:
            prev = counts[-1]
            counts.append([
                sum(bin(m).count("1") * prev[t] for m, t in dfa.transitions[s])
                for s in range(n)
            ])
        return counts[length]

    def walk(length):
        # iterative depth-first enumeration in symbol order
        prefix = []
        stack = [(0, length, 0)]
        while stack and len(out) < k:
            state, remaining, pos = stack.pop()
            if remaining == 0:
                w = "".join(prefix)
                if w not in avoid:
                    out.append(w)
                if prefix:
                    prefix.pop()
                continue
            row = count(remaining - 1)
            while pos < T.NSYM and not row[tab[state][T.SYMBOL_ORDER[pos]]]:
                pos += 1
            if pos == T.NSYM:
                if prefix:
                    prefix.pop()
                continue
            sym = T.SYMBOL_ORDER[pos]
            stack.append((state, remaining, pos + 1))
            prefix.append(T.index_char(sym))
            stack.append((tab[state][sym], remaining - 1, 0))

    length = 0
    limit = (k + len(avoid) + 1) * (n + 1)
    while len(out) < k and length <= limit:
        if finite and length > n:
            break
        if count(length)[0]:
            walk(length)
        length += 1
    return out[:k]


def shortest_word(dfa: Dfa):
    words = example_words(dfa, 1)
    return words[0] if words else None
