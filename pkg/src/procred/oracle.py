"""Language-equivalence checks, size metrics and the procedure-nesting check."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .automata import (
    BOT,
    STAR,
    Automaton,
    Nfa,
    Sra,
    initial_configurations,
    is_accepting,
    post,
    reach,
    signatures,
)

EQUAL = "equal"
COUNTEREXAMPLE = "counterexample"
CAP_EXCEEDED = "cap-exceeded"


@dataclass(frozen=True)
class EquivalenceResult:
    status: str
    word: Optional[tuple] = None
    explored: int = 0

    @property
    def equal(self) -> bool:
        return self.status == EQUAL

    @property
    def conclusive(self) -> bool:
        return self.status != CAP_EXCEEDED

    def __bool__(self):
        return self.equal


def _check_alphabets(x: Automaton, y: Automaton):
    if x.alphabet != y.alphabet:
        raise ValueError(
            f"alphabets differ: {sorted(x.alphabet ^ y.alphabet)} appear in only one automaton"
        )


def configuration_count(a: Automaton) -> int:
    return len(a.states) if isinstance(a, Nfa) else len(reach(a))


def default_bound(x: Automaton, y: Automaton) -> int:
    return 2 * max(configuration_count(x), configuration_count(y)) + 2


def _word(parents, node):
    out = []
    while parents[node] is not None:
        node, sym = parents[node]
        out.append(sym)
    return tuple(reversed(out))


def equivalent_bounded(x: Automaton, y: Automaton, max_len: Optional[int] = None) -> EquivalenceResult:
    """Compare verdicts on every word of length at most ``max_len``.

    Breadth-first over pairs of configuration sets, so the returned
    counterexample is the shortest one, ties broken by symbol order.
    """
    _check_alphabets(x, y)
    if max_len is None:
        max_len = default_bound(x, y)
    symbols = sorted(x.alphabet)
    start = (initial_configurations(x), initial_configurations(y))
    parents = {start: None}
    if is_accepting(x, start[0]) != is_accepting(y, start[1]):
        return EquivalenceResult(COUNTEREXAMPLE, (), 1)
    frontier = [start]
    for _ in range(max_len):
        nxt = []
        for node in frontier:
            for sym in symbols:
                child = (post(x, node[0], sym), post(y, node[1], sym))
                if child in parents:
                    continue
                parents[child] = (node, sym)
                if is_accepting(x, child[0]) != is_accepting(y, child[1]):
                    return EquivalenceResult(COUNTEREXAMPLE, _word(parents, child), len(parents))
                nxt.append(child)
        if not nxt:
            break
        frontier = nxt
    return EquivalenceResult(EQUAL, None, len(parents))


class _CapExceeded(Exception):
    pass


def _determinize(a: Automaton, symbols, cap: int):
    """Subset construction from the initial set; returns (transition table, accepting flags)."""
    start = initial_configurations(a)
    index = {start: 0}
    table = []
    accepting = []
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        accepting.append(is_accepting(a, cur))
        row = []
        for sym in symbols:
            nxt = post(a, cur, sym)
            if nxt not in index:
                if len(index) >= cap:
                    raise _CapExceeded
                index[nxt] = len(index)
                queue.append(nxt)
            row.append(index[nxt])
        table.append(row)
    return table, accepting


def equivalent_exact(x: Automaton, y: Automaton, config_cap: int = 10_000) -> EquivalenceResult:
    """Decide equivalence via the product of both subset constructions.

    Returns ``cap-exceeded`` when either determinization needs more than
    ``config_cap`` subsets.
    """
    _check_alphabets(x, y)
    symbols = sorted(x.alphabet)
    try:
        dx, ax = _determinize(x, symbols, config_cap)
        dy, ay = _determinize(y, symbols, config_cap)
    except _CapExceeded:
        return EquivalenceResult(CAP_EXCEEDED)
    start = (0, 0)
    parents = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if ax[node[0]] != ay[node[1]]:
            return EquivalenceResult(COUNTEREXAMPLE, _word(parents, node), len(parents))
        for k, sym in enumerate(symbols):
            child = (dx[node[0]][k], dy[node[1]][k])
            if child not in parents:
                parents[child] = (node, sym)
                queue.append(child)
    return EquivalenceResult(EQUAL, None, len(parents))


def equivalent(x: Automaton, y: Automaton, config_cap: int = 10_000, max_len: Optional[int] = None):
    """Exact check, falling back to the bounded one past the subset cap."""
    result = equivalent_exact(x, y, config_cap)
    if result.conclusive:
        return result
    return equivalent_bounded(x, y, max_len)


NFA_TRANSITION_BITS = 72
SRA_TRANSITION_BITS = 80


@dataclass(frozen=True)
class Metrics:
    states: int
    transitions: int
    registers: int
    register_using: int

    @property
    def states_plus_registers(self) -> int:
        return self.states + self.registers

    @property
    def plain(self) -> int:
        return self.transitions - self.register_using

    @property
    def bits(self) -> int:
        return NFA_TRANSITION_BITS * self.plain + SRA_TRANSITION_BITS * self.register_using

    def as_dict(self) -> dict:
        return {
            "states": self.states,
            "transitions": self.transitions,
            "registers": self.registers,
            "states_plus_registers": self.states_plus_registers,
            "register_using": self.register_using,
            "bits": self.bits,
        }


def uses_register(t) -> bool:
    return not (t.test == t.set and t.test in (BOT, STAR))


def metrics(a: Automaton) -> Metrics:
    if isinstance(a, Nfa):
        return Metrics(len(a.states), len(a.transitions), 0, 0)
    return Metrics(
        len(a.states),
        len(a.transitions),
        len(a.registers),
        sum(uses_register(t) for t in a.transitions),
    )


def procedures(a: Sra) -> dict:
    """Procedure state sets keyed by their largest procedure signature.

    ``P(I) = {q | I <= Sig(q)}`` for nonempty ``I``; distinct sets arise from
    the intersection closure of the single-symbol sets.
    """
    sig = signatures(a)
    single = {}
    for eta in a.registers:
        states = frozenset(q for q, s in sig.items() if eta in s)
        if states:
            single[eta] = states
    family = set(single.values())
    frontier = set(family)
    while frontier:
        new = set()
        for p in frontier:
            for q in family:
                r = p & q
                if r and r not in family:
                    new.add(r)
        family |= new
        frontier = new
    out = {}
    for p in family:
        ids = frozenset(eta for eta, states in single.items() if p <= states)
        out[ids] = p
    return out


def internal_transitions(a: Sra, p: frozenset) -> frozenset:
    return frozenset(t for t in a.transitions if t.src in p and t.dst in p)


def nesting_violations(a: Sra, on: str = "states") -> list:
    """Pairs of procedures that overlap without one containing the other.

    ``on`` selects what is compared: the procedures' state sets or their
    internal-transition sets.
    """
    procs = procedures(a)
    keyed = [
        (ids, p if on == "states" else internal_transitions(a, p))
        for ids, p in sorted(procs.items(), key=lambda kv: sorted(kv[0]))
    ]
    bad = []
    for i, (ix, x) in enumerate(keyed):
        for iy, y in keyed[i + 1:]:
            if x & y and not (x <= y or y <= x):
                bad.append((ix, iy))
    return bad


def is_well_nested(a: Sra, on: str = "states") -> bool:
    return not nesting_violations(a, on)
