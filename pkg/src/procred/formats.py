"""Readers and writers for the native text format and the BA format.

Native format, one item per line, ``#`` starts a comment::

    @SRA fig1c
    %Initial q0
    %Final q7
    %Registers 0 1
    q0 x _/0 p
    p a */* r
    q7 y q0          # NFA-style line, means _/_ in an SRA file

BA format: leading ``[s]`` lines name initial states, ``a,[p]->[q]`` lines
are transitions and trailing ``[s]`` lines name final states.
"""
from __future__ import annotations

import re
import warnings
from typing import Union

from .automata import BOT, STAR, AutomatonError, Nfa, Sra, register_token


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class _Interner:
    def __init__(self):
        self.ids = {}

    def __call__(self, name: str) -> int:
        return self.ids.setdefault(name, len(self.ids))

    def names(self) -> dict:
        return {k: name for name, k in self.ids.items()}


def _tokens(line: str):
    """Split a line into (column, token) pairs, dropping any comment."""
    line = line.split("#", 1)[0]
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]


def _register(token: str, lineno: int, col: int) -> int:
    if token == "_":
        return BOT
    if token == "*":
        return STAR
    if token.isdigit():
        return int(token)
    raise ParseError(f"malformed register token {token!r}", lineno, col)


def parse_native(text: str) -> Union[Nfa, Sra]:
    kind = None
    name = None
    state = _Interner()
    initial, final, alphabet, transitions = set(), set(), set(), []
    declared_registers = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        col, head = toks[0]
        if kind is None:
            if head not in ("@NFA", "@SRA"):
                raise ParseError("expected a '@NFA <name>' or '@SRA <name>' header", lineno, col)
            if len(toks) > 2:
                raise ParseError("the header takes a single name", lineno, toks[2][0])
            kind = head[1:]
            name = toks[1][1] if len(toks) > 1 else ""
            continue
        if head.startswith("@"):
            raise ParseError("duplicate header", lineno, col)
        if head.startswith("%"):
            args = [t for _, t in toks[1:]]
            if head == "%Initial":
                initial.update(state(s) for s in args)
            elif head == "%Final":
                final.update(state(s) for s in args)
            elif head == "%Registers":
                if kind != "SRA":
                    raise ParseError("%Registers is only allowed in an @SRA file", lineno, col)
                declared_registers = set(declared_registers or ())
                for c, t in toks[1:]:
                    v = _register(t, lineno, c)
                    if v < 0:
                        raise ParseError(f"{t!r} cannot be declared as a register symbol", lineno, c)
                    declared_registers.add(v)
            else:
                raise ParseError(f"unknown directive {head}", lineno, col)
            continue
        if len(toks) == 3:
            (_, src), (_, sym), (_, dst) = toks
            test = set_ = BOT
        elif len(toks) == 4:
            if kind != "SRA":
                raise ParseError("register labels are only allowed in an @SRA file", lineno, toks[2][0])
            (_, src), (_, sym), (lc, label), (_, dst) = toks
            if label.count("/") != 1:
                raise ParseError(f"expected a T/S register label, got {label!r}", lineno, lc)
            t_tok, s_tok = label.split("/")
            test = _register(t_tok, lineno, lc)
            set_ = _register(s_tok, lineno, lc + len(t_tok) + 1)
            if (test == STAR) != (set_ == STAR):
                raise ParseError("the wildcard must appear on both sides of a label (*/*)", lineno, lc)
        else:
            raise ParseError(
                f"expected 'src symbol dst' or 'src symbol T/S dst', got {len(toks)} tokens", lineno, col
            )
        alphabet.add(sym)
        transitions.append((state(src), sym, test, set_, state(dst), lineno))
    if kind is None:
        raise ParseError("missing '@NFA <name>' or '@SRA <name>' header", 1)
    if not initial:
        raise ParseError("no %Initial directive", len(text.splitlines()) or 1)
    used = {v for t in transitions for v in t[2:4] if v >= 0}
    if declared_registers is not None:
        for t in transitions:
            for v in t[2:4]:
                if v >= 0 and v not in declared_registers:
                    raise ParseError(f"register symbol {v} is not declared in %Registers", t[5])
        registers = declared_registers
    else:
        registers = used
    names = state.names()
    try:
        if kind == "NFA":
            return Nfa(
                states=names,
                alphabet=alphabet,
                transitions=[(s, a, d) for s, a, _, _, d, _ in transitions],
                initial=initial,
                final=final,
                names=names,
            )
        return Sra(
            states=names,
            alphabet=alphabet,
            registers=registers,
            transitions=[t[:5] for t in transitions],
            initial=initial,
            final=final,
            names=names,
        )
    except AutomatonError as exc:
        raise ParseError(str(exc), 1) from exc


def _printable_names(a) -> dict:
    names = {q: a.name(q) for q in a.states}
    ok = all(n and not re.search(r"[\s#\[\]]", n) and not n.startswith(("@", "%")) for n in names.values())
    if not ok or len(set(names.values())) != len(names):
        names = {q: f"q{q}" for q in a.states}
    return names


def _check_symbols(a):
    for sym in a.alphabet:
        if not sym or re.search(r"[\s#,\[\]]", sym):
            raise ValueError(f"symbol {sym!r} cannot be written in a text format")


def print_native(a: Union[Nfa, Sra], name: str = "A") -> str:
    _check_symbols(a)
    names = _printable_names(a)
    kind = "SRA" if isinstance(a, Sra) else "NFA"
    lines = [f"@{kind} {name}"]
    lines.append("%Initial " + " ".join(names[q] for q in sorted(a.initial)))
    if a.final:
        lines.append("%Final " + " ".join(names[q] for q in sorted(a.final)))
    if kind == "SRA":
        lines.append("%Registers " + " ".join(str(r) for r in sorted(a.registers)))
        for t in sorted(a.transitions):
            label = f"{register_token(t.test)}/{register_token(t.set)}"
            lines.append(f"{names[t.src]} {t.symbol} {label} {names[t.dst]}")
    else:
        for t in sorted(a.transitions):
            lines.append(f"{names[t.src]} {t.symbol} {names[t.dst]}")
    return "\n".join(lines) + "\n"


_BA_STATE = re.compile(r"^\[([^\[\]]+)\]$")
_BA_TRANSITION = re.compile(r"^([^,\s]+),\[([^\[\]]+)\]->\[([^\[\]]+)\]$")


def parse_ba(text: str) -> Nfa:
    state = _Interner()
    initial, final, transitions = [], [], []
    seen_transition = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        m = _BA_TRANSITION.match(line)
        if m:
            sym, src, dst = m.groups()
            transitions.append((state(src), sym, state(dst)))
            seen_transition = True
            continue
        m = _BA_STATE.match(line)
        if m:
            (final if seen_transition else initial).append(state(m.group(1)))
            continue
        column = raw.index(line[0]) + 1
        if "->" in line or "," in line:
            raise ParseError("malformed transition, expected 'a,[p]->[q]'", lineno, column)
        raise ParseError("malformed line, expected '[state]' or 'a,[p]->[q]'", lineno, column)
    if not transitions and initial:
        # a transition-free file: the first line is initial, the rest final
        initial, final = initial[:1], initial[1:]
    if not initial:
        if not transitions:
            raise ParseError("empty automaton", 1)
        initial = [transitions[0][0]]
    if not final:
        warnings.warn("BA file has no final states: the language is empty", stacklevel=2)
    names = state.names()
    return Nfa(
        states=names,
        alphabet={t[1] for t in transitions},
        transitions=transitions,
        initial=initial,
        final=final,
        names=names,
    )


def print_ba(a: Union[Nfa, Sra]) -> str:
    if isinstance(a, Sra):
        if any(t.test != BOT or t.set != BOT for t in a.transitions):
            raise ValueError("only register-free automata can be written in BA format")
    _check_symbols(a)
    names = _printable_names(a)
    lines = [f"[{names[q]}]" for q in sorted(a.initial)]
    lines += [f"{t.symbol},[{names[t.src]}]->[{names[t.dst]}]" for t in sorted(a.transitions)]
    lines += [f"[{names[q]}]" for q in sorted(a.final)]
    return "\n".join(lines) + "\n"


def detect_format(text: str) -> str:
    for line in text.splitlines():
        toks = _tokens(line)
        if toks:
            return "native" if toks[0][1].startswith("@") else "ba"
    return "native"


def parse(text: str, fmt: str = "auto"):
    if fmt == "auto":
        fmt = detect_format(text)
    if fmt == "native":
        return parse_native(text)
    if fmt == "ba":
        return parse_ba(text)
    raise ValueError(f"unknown format {fmt!r}")


def canonical(a) -> tuple:
    """Name-level view of an automaton, independent of the integer state ids."""
    n = a.name
    if isinstance(a, Sra):
        trans = frozenset((n(t.src), t.symbol, t.test, t.set, n(t.dst)) for t in a.transitions)
        regs = a.registers
    else:
        trans = frozenset((n(t.src), t.symbol, n(t.dst)) for t in a.transitions)
        regs = frozenset()
    return (
        type(a).__name__,
        frozenset(n(q) for q in a.states),
        a.alphabet,
        regs,
        trans,
        frozenset(n(q) for q in a.initial),
        frozenset(n(q) for q in a.final),
    )
