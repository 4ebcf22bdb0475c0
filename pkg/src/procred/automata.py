"""Core automaton types: NFAs, single-register automata (SRAs) and their semantics.

State ids are plain integers; human-readable names live in a side table
(``names``) that is only used for printing.  Register symbols are
non-negative integers, with two reserved negative markers:

* ``BOT`` (-1): the default register value,
* ``STAR`` (-2): the wildcard, only ever used as a matched ``STAR/STAR`` pair.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

BOT = -1
STAR = -2


class AutomatonError(ValueError):
    """Raised when an automaton violates a structural invariant."""


class UnknownSymbolError(ValueError):
    """Raised when a word contains a symbol outside the alphabet."""


class NfaTransition(NamedTuple):
    src: int
    symbol: str
    dst: int


class SraTransition(NamedTuple):
    src: int
    symbol: str
    test: int
    set: int
    dst: int

    @property
    def is_plain(self) -> bool:
        """True for ``BOT/BOT`` and ``STAR/STAR`` (register left untouched)."""
        return self.test == self.set and self.test in (BOT, STAR)

    @property
    def is_star(self) -> bool:
        return self.test == STAR


class Configuration(NamedTuple):
    state: int
    register: int


def register_token(value: int) -> str:
    if value == BOT:
        return "_"
    if value == STAR:
        return "*"
    return str(value)


def _frozen(obj, name, value):
    object.__setattr__(obj, name, frozenset(value))


@dataclass(frozen=True, eq=True)
class Nfa:
    states: frozenset
    alphabet: frozenset
    transitions: frozenset
    initial: frozenset
    final: frozenset
    names: Mapping[int, str] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        for name in ("states", "alphabet", "initial", "final"):
            _frozen(self, name, getattr(self, name))
        _frozen(self, "transitions", (NfaTransition(*t) for t in self.transitions))
        if not self.initial:
            raise AutomatonError("an NFA needs at least one initial state")
        if not self.initial <= self.states or not self.final <= self.states:
            raise AutomatonError("initial/final states must be states of the automaton")
        for t in self.transitions:
            if t.src not in self.states or t.dst not in self.states:
                raise AutomatonError(f"transition {t} references an unknown state")
            if t.symbol not in self.alphabet:
                raise AutomatonError(f"transition {t} uses a symbol outside the alphabet")

    def name(self, q: int) -> str:
        return self.names.get(q, f"q{q}")

    @cached_property
    def successors(self) -> dict:
        out = defaultdict(list)
        for t in self.transitions:
            out[t.src, t.symbol].append(t.dst)
        return dict(out)


@dataclass(frozen=True, eq=True)
class Sra:
    states: frozenset
    alphabet: frozenset
    registers: frozenset
    transitions: frozenset
    initial: frozenset
    final: frozenset
    names: Mapping[int, str] = field(default_factory=dict, compare=False, hash=False, repr=False)
    # next id handed out to a fresh state; keeps procedure ids globally increasing
    serial: int = field(default=-1, compare=False, hash=False, repr=False)

    def __post_init__(self):
        for name in ("states", "alphabet", "registers", "initial", "final"):
            _frozen(self, name, getattr(self, name))
        _frozen(self, "transitions", (SraTransition(*t) for t in self.transitions))
        if BOT in self.registers or STAR in self.registers:
            raise AutomatonError("BOT and STAR are reserved and cannot be register symbols")
        if any(not isinstance(r, int) or r < 0 for r in self.registers):
            raise AutomatonError("register symbols must be non-negative integers")
        if not self.initial:
            raise AutomatonError("an SRA needs at least one initial state")
        if not self.initial <= self.states or not self.final <= self.states:
            raise AutomatonError("initial/final states must be states of the automaton")
        allowed = self.registers | {BOT, STAR}
        for t in self.transitions:
            if t.src not in self.states or t.dst not in self.states:
                raise AutomatonError(f"transition {t} references an unknown state")
            if t.symbol not in self.alphabet:
                raise AutomatonError(f"transition {t} uses a symbol outside the alphabet")
            if t.test not in allowed or t.set not in allowed:
                raise AutomatonError(f"transition {t} uses an undeclared register symbol")
            if (t.test == STAR) != (t.set == STAR):
                raise AutomatonError(f"transition {t} mixes the wildcard with a concrete value")
        floor = max(self.states, default=-1) + 1
        if self.serial < floor:
            object.__setattr__(self, "serial", floor)

    def name(self, q: int) -> str:
        return self.names.get(q, f"q{q}")

    @cached_property
    def outgoing(self) -> dict:
        out = defaultdict(list)
        for t in sorted(self.transitions):
            out[t.src].append(t)
        return dict(out)

    @cached_property
    def reachable_configurations(self) -> frozenset:
        return _reach(self)

    @cached_property
    def signature_map(self) -> dict:
        sig = {q: set() for q in self.states}
        for q, v in self.reachable_configurations:
            if v != BOT:
                sig[q].add(v)
        return {q: frozenset(s) for q, s in sig.items()}

    def replace(self, **changes) -> "Sra":
        fields = dict(
            states=self.states,
            alphabet=self.alphabet,
            registers=self.registers,
            transitions=self.transitions,
            initial=self.initial,
            final=self.final,
            names=self.names,
            serial=self.serial,
        )
        fields.update(changes)
        return Sra(**fields)


Automaton = Union[Nfa, Sra]


def lift_nfa(n: Nfa) -> Sra:
    """Embed an NFA as a register-free SRA (every transition becomes ``BOT/BOT``)."""
    return Sra(
        states=n.states,
        alphabet=n.alphabet,
        registers=(),
        transitions=(SraTransition(t.src, t.symbol, BOT, BOT, t.dst) for t in n.transitions),
        initial=n.initial,
        final=n.final,
        names=dict(n.names),
    )


def as_sra(a: Automaton) -> Sra:
    return lift_nfa(a) if isinstance(a, Nfa) else a


def normalize_terminals(a: Automaton) -> Automaton:
    """Return an equivalent automaton with one fresh initial and one fresh final state.

    Transitions leaving an old initial state are copied to leave the new
    initial state ``i``; transitions entering an old final state are copied to
    enter the new final state ``f``.  ``i`` is also final iff the empty word is
    accepted.  Works on NFAs and SRAs alike (copies keep their register labels).
    """
    top = max(a.states, default=-1)
    if isinstance(a, Sra):
        top = max(top, a.serial - 1)
    i, f = top + 1, top + 2
    old = list(a.transitions)
    new = set(old)
    for t in old:
        src_init, dst_final = t.src in a.initial, t.dst in a.final
        if src_init:
            new.add(t._replace(src=i))
        if dst_final:
            new.add(t._replace(dst=f))
        if src_init and dst_final:
            new.add(t._replace(src=i, dst=f))
    accepts_empty = bool(a.initial & a.final)
    names = dict(a.names)
    names[i] = _fresh_name(names.values(), "init")
    names[f] = _fresh_name(names.values(), "fin")
    common = dict(
        states=a.states | {i, f},
        alphabet=a.alphabet,
        transitions=new,
        initial={i},
        final={i, f} if accepts_empty else {f},
        names=names,
    )
    if isinstance(a, Sra):
        return Sra(registers=a.registers, serial=f + 1, **common)
    return Nfa(**common)


def _fresh_name(taken: Iterable[str], base: str) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def _step(out: Sequence[SraTransition], register: int):
    for t in out:
        if t.test == STAR:
            yield t, t.dst, register
        elif t.test == register:
            yield t, t.dst, t.set


def _reach(a: Sra) -> frozenset:
    seen = {Configuration(q, BOT) for q in a.initial}
    queue = deque(seen)
    out = a.outgoing
    while queue:
        q, v = queue.popleft()
        for _, s, w in _step(out.get(q, ()), v):
            c = Configuration(s, w)
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return frozenset(seen)


def reach(a: Sra) -> frozenset:
    """All configurations reachable from ``I x {BOT}``."""
    return a.reachable_configurations


def signatures(a: Sra) -> dict:
    """Map every state to the register symbols that can be in the register there."""
    return a.signature_map


def induced_nfa(a: Sra) -> Nfa:
    """The NFA over reachable configurations that defines the language of ``a``."""
    configs = sorted(reach(a))
    index = {c: k for k, c in enumerate(configs)}
    out = a.outgoing
    transitions = set()
    for c in configs:
        for t, s, w in _step(out.get(c.state, ()), c.register):
            transitions.add(NfaTransition(index[c], t.symbol, index[Configuration(s, w)]))
    names = {k: f"{a.name(c.state)}|{register_token(c.register)}" for k, c in enumerate(configs)}
    return Nfa(
        states=range(len(configs)),
        alphabet=a.alphabet,
        transitions=transitions,
        initial={index[Configuration(q, BOT)] for q in a.initial},
        final={index[c] for c in configs if c.state in a.final},
        names=names,
    )


def initial_configurations(a: Automaton) -> frozenset:
    if isinstance(a, Nfa):
        return frozenset(a.initial)
    return frozenset(Configuration(q, BOT) for q in a.initial)


def post(a: Automaton, current: frozenset, symbol: str) -> frozenset:
    """One step of the subset simulation (on states for NFAs, configurations for SRAs)."""
    if isinstance(a, Nfa):
        succ = a.successors
        return frozenset(s for q in current for s in succ.get((q, symbol), ()))
    out = a.outgoing
    nxt = set()
    for q, v in current:
        for t, s, w in _step(out.get(q, ()), v):
            if t.symbol == symbol:
                nxt.add(Configuration(s, w))
    return frozenset(nxt)


def is_accepting(a: Automaton, current: frozenset) -> bool:
    if isinstance(a, Nfa):
        return bool(current & a.final)
    return any(c.state in a.final for c in current)


def accepts(a: Automaton, word: Sequence[str]) -> bool:
    current = initial_configurations(a)
    for symbol in word:
        if symbol not in a.alphabet:
            raise UnknownSymbolError(f"symbol {symbol!r} is not in the alphabet")
        current = post(a, current, symbol)
        if not current:
            return False
    return is_accepting(a, current)


def trim(a: Sra) -> Sra:
    """Drop states that no reachable configuration visits."""
    alive = {c.state for c in reach(a)}
    if alive == a.states:
        return a
    return a.replace(
        states=alive,
        transitions={t for t in a.transitions if t.src in alive and t.dst in alive},
        final=a.final & alive,
        names={q: n for q, n in a.names.items() if q in alive},
    )
