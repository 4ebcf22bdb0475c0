"""Collapse the two invocations of a similarity graph into one procedure."""
from __future__ import annotations

from typing import Iterable, Mapping

from .automata import BOT, STAR, Sra, SraTransition, signatures
from .simgraph import (
    InvalidSimilarityGraph,
    SimilarityGraph,
    TransitionPartition,
    classify_transitions,
    validate_simgraph,
)


def pick(symbols: Iterable[int]) -> int:
    """Deterministic choice of an invocation symbol: the smallest one."""
    symbols = list(symbols)
    if not symbols:
        raise ValueError("cannot pick from an empty set of register symbols")
    return min(symbols)


def new_id_symbol(a) -> int:
    """Smallest non-negative integer not yet used as a register symbol.

    Accepts an SRA or a plain collection of register symbols.
    """
    used = a.registers if isinstance(a, Sra) else set(a)
    k = 0
    while k in used:
        k += 1
    return k


def invocation_ids(a: Sra, g: SimilarityGraph) -> tuple:
    """Assign invocation Ids to every invocation state.

    An invocation that is not yet inside a procedure (empty signature) gets a
    fresh symbol; otherwise its signature is reused.  Returns ``(ids, registers)``
    with the register alphabet extended by the fresh symbols.
    """
    sig = signatures(a)
    registers = set(a.registers)
    root_ids = []
    for r in g.root:
        if sig[r]:
            root_ids.append(sig[r])
        else:
            fresh = new_id_symbol(registers)
            registers.add(fresh)
            root_ids.append(frozenset({fresh}))
    ids = {}
    for q1, q2 in g.path:
        ids[q1], ids[q2] = root_ids
    return ids, frozenset(registers)


def _procedure_name(names: Mapping[int, str], q: int) -> str:
    taken = set(names.values())
    name = f"p{q}"
    while name in taken:
        name += "'"
    return name


def procedure_states(a: Sra, g: SimilarityGraph) -> dict:
    """Map each invocation state to the fresh procedure state replacing its pair."""
    pmap = {}
    for k, (q1, q2) in enumerate(g.path):
        pmap[q1] = pmap[q2] = a.serial + k
    return pmap


def _transitions(part: TransitionPartition, ids: Mapping, pmap: Mapping) -> set:
    out = set()
    for t in part.entry:
        s2 = pmap[t.dst]
        if t.set == BOT:
            out.add(t._replace(set=pick(ids[t.dst]), dst=s2))
        else:
            out.add(t._replace(dst=s2))
    for t in part.exit:
        r2 = pmap[t.src]
        if t.test == BOT:
            out.add(t._replace(src=r2, test=pick(ids[t.src])))
        elif t.test == STAR:
            out.update(t._replace(src=r2, test=eta, set=eta) for eta in ids[t.src])
        else:
            out.add(t._replace(src=r2))
    for t in part.common:
        out.add(SraTransition(pmap[t.src], t.symbol, STAR, STAR, pmap[t.dst]))
    for t in part.unique:
        r2, s2 = pmap[t.src], pmap[t.dst]
        if t.test == BOT and t.set == BOT:
            eta = pick(ids[t.src])
            out.add(SraTransition(r2, t.symbol, eta, eta, s2))
        elif t.test == STAR:
            out.update(SraTransition(r2, t.symbol, eta, eta, s2) for eta in ids[t.src])
        else:
            out.add(SraTransition(r2, t.symbol, t.test, t.set, s2))
    for t in part.switch:
        test = pick(ids[t.src]) if t.test == BOT else t.test
        set_ = pick(ids[t.dst]) if t.set == BOT else t.set
        out.add(SraTransition(pmap[t.src], t.symbol, test, set_, pmap[t.dst]))
    return out


def create_procedure_transitions(
    a: Sra, g: SimilarityGraph, ids: Mapping, pmap: Mapping
) -> Sra:
    """Add the procedure states of ``pmap`` and their transitions to ``a``.

    The invocation states and their incident transitions are kept; removing
    them is left to :func:`create_procedure`.
    """
    part = classify_transitions(a, g)
    registers = set(a.registers)
    for symbols in ids.values():
        registers.update(symbols)
    new_states = set(pmap.values())
    names = dict(a.names)
    for q in sorted(new_states):
        names[q] = _procedure_name(names, q)
    return a.replace(
        states=a.states | new_states,
        registers=registers,
        transitions=a.transitions | _transitions(part, ids, pmap),
        names=names,
        serial=max(a.serial, max(new_states) + 1),
    )


def create_procedure(a: Sra, g: SimilarityGraph) -> Sra:
    """Replace the two invocations of ``g`` by a single register-guarded procedure."""
    violations = validate_simgraph(a, g)
    if violations:
        raise InvalidSimilarityGraph(violations)
    ids, registers = invocation_ids(a, g)
    pmap = procedure_states(a, g)
    part = classify_transitions(a, g)
    gq = g.states
    new_states = set(pmap.values())
    kept = {t for t in part.untouched}
    names = {q: n for q, n in a.names.items() if q not in gq}
    for q in sorted(new_states):
        names[q] = _procedure_name(names, q)
    return a.replace(
        states=(a.states - gq) | new_states,
        registers=registers,
        transitions=kept | _transitions(part, ids, pmap),
        names=names,
        serial=max(a.serial, max(new_states) + 1),
    )
