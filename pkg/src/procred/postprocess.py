"""Clean-up passes run after the reduction loop."""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass

from .automata import BOT, STAR, Configuration, Sra, reach, signatures

log = logging.getLogger(__name__)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


@dataclass(frozen=True)
class SymbolPartition:
    classes: tuple  # sorted tuples, largest class first
    target: tuple  # the designated class C
    mapping: dict  # symbol -> symbol of C (identity on C)


def symbol_partition(a: Sra) -> SymbolPartition:
    """Classes of register symbols under the closure of "appear together in some signature"."""
    uf = _UnionFind(a.registers)
    for sig in signatures(a).values():
        items = sorted(sig)
        for x in items[1:]:
            uf.union(items[0], x)
    groups = defaultdict(list)
    for x in a.registers:
        groups[uf.find(x)].append(x)
    classes = sorted((tuple(sorted(g)) for g in groups.values()), key=lambda c: (-len(c), c[0]))
    if not classes:
        return SymbolPartition((), (), {})
    target = classes[0]
    mapping = {}
    for cls in classes:
        for k, x in enumerate(cls):
            mapping[x] = target[k]
    return SymbolPartition(tuple(classes), target, mapping)


def _rename(v, mapping):
    return mapping.get(v, v) if v >= 0 else v


def merge_register_symbols(a: Sra) -> Sra:
    """Reuse the symbols of the largest class for every other class.

    A class whose renaming would let a never-firing guard match a live
    register value is left alone, so the language cannot change.
    """
    part = symbol_partition(a)
    if len(part.classes) <= 1:
        return a
    sig = signatures(a)
    mapping = {}
    for cls in part.classes[1:]:
        trial = dict(mapping)
        trial.update((x, part.mapping[x]) for x in cls)
        if _renaming_is_safe(a, sig, trial):
            mapping = trial
        else:
            log.info("register class %s kept apart: renaming would enable a dead guard", cls)
    if not mapping:
        return a
    transitions = {
        t._replace(test=_rename(t.test, mapping), set=_rename(t.set, mapping)) for t in a.transitions
    }
    registers = {_rename(x, mapping) for x in a.registers}
    return a.replace(transitions=transitions, registers=registers)


def _renaming_is_safe(a, sig, mapping) -> bool:
    """Every concrete guard must fire on exactly the same configurations after renaming."""
    for t in a.transitions:
        if t.test < 0:
            continue
        live = t.test in sig[t.src]
        renamed = {_rename(v, mapping) for v in sig[t.src]}
        if (_rename(t.test, mapping) in renamed) != live:
            return False
    return True


def vacuous_guard_sets(a: Sra) -> list:
    """Groups ``(r, symbol, s, Sig(r))`` whose guards together test every possible value."""
    sig = signatures(a)
    configs = reach(a)
    guarded = defaultdict(set)
    for t in a.transitions:
        if t.test >= 0 and t.test == t.set:
            guarded[t.src, t.symbol, t.dst].add(t.test)
    out = []
    for (r, sym, s), etas in sorted(guarded.items()):
        if sig[r] and sig[r] <= etas and Configuration(r, BOT) not in configs:
            out.append((r, sym, s, sig[r]))
    return out


def remove_vacuous_guards(a: Sra) -> Sra:
    """Replace each complete family of ``eta/eta`` guards by one wildcard transition."""
    while True:
        groups = vacuous_guard_sets(a)
        if not groups:
            return a
        transitions = set(a.transitions)
        for r, sym, s, etas in groups:
            for eta in etas:
                transitions.discard((r, sym, eta, eta, s))
            transitions.add((r, sym, STAR, STAR, s))
        a = a.replace(transitions=transitions)


def postprocess(a: Sra) -> Sra:
    return merge_register_symbols(remove_vacuous_guards(merge_register_symbols(a)))
