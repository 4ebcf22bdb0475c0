"""Automata used by the tests, the benchmark and the ``generate`` command."""
from __future__ import annotations

import random
import string

from .automata import Nfa, normalize_terminals


def from_edges(edges, initial, final, names=None) -> Nfa:
    """Build an NFA from ``(src, symbol, dst)`` triples over integer states."""
    states = {q for e in edges for q in (e[0], e[2])} | set(initial) | set(final)
    return Nfa(
        states=states,
        alphabet={e[1] for e in edges},
        transitions=edges,
        initial=initial,
        final=final,
        names=names or {q: f"q{q}" for q in states},
    )


def figure1_nfa() -> Nfa:
    """The 8-state automaton of (xac*ax)+(ya(a+b)y)."""
    edges = [
        (0, "x", 1), (0, "y", 2),
        (1, "a", 3), (2, "a", 4),
        (3, "a", 5), (3, "c", 3),
        (4, "a", 6), (4, "b", 6),
        (5, "x", 7), (6, "y", 7),
    ]
    return from_edges(edges, {0}, {7})


def word_nfa(word) -> Nfa:
    """Single-word automaton: a chain of ``len(word) + 1`` states."""
    edges = [(k, sym, k + 1) for k, sym in enumerate(word)]
    return from_edges(edges, {0}, {len(word)})


def counter_word_nfa(n: int = 100) -> Nfa:
    """The word x a^n y."""
    return word_nfa(["x"] + ["a"] * n + ["y"])


def shared_infix_nfa(k: int) -> Nfa:
    """Two branches ``x w x`` and ``y w' y`` sharing an infix of length ``k``.

    The infix uses pairwise distinct symbols so it cannot fold onto itself;
    the second branch additionally carries an alternative symbol on its last
    infix step, as in the Figure 1 pattern.
    """
    infix = [string.ascii_lowercase[i % 20] for i in range(k)]
    edges = []
    start, fin = 0, 1
    top = 2
    for lead in ("X", "Y"):
        prev = top
        edges.append((start, lead, prev))
        top += 1
        for sym in infix:
            edges.append((prev, sym, top))
            prev, top = top, top + 1
        edges.append((prev, lead, fin))
    # one extra unique transition on the second branch
    edges.append((top - 2, "Z", top - 1))
    return from_edges(edges, {start}, {fin})


def random_nfa(
    n_states: int,
    n_symbols: int,
    density: float,
    rng: random.Random,
    normalize: bool = True,
) -> Nfa:
    """Random NFA with graph edge density ``density``.

    Each ordered pair of states (loops included) is joined with probability
    ``density`` by one transition on a uniformly chosen symbol.
    """
    symbols = list(string.ascii_lowercase[:n_symbols])
    edges = [
        (p, rng.choice(symbols), q)
        for p in range(n_states)
        for q in range(n_states)
        if rng.random() < density
    ]
    final = {q for q in range(n_states) if rng.random() < 0.25} or {n_states - 1}
    names = {q: f"s{q}" for q in range(n_states)}
    nfa = Nfa(
        states=range(n_states),
        alphabet=symbols,
        transitions=edges,
        initial={0},
        final=final,
        names=names,
    )
    return normalize_terminals(nfa) if normalize else nfa
