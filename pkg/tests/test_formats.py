import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fig1c
from oracles import language, random_sra
from procred.automata import BOT, STAR, Nfa, Sra, accepts
from procred.formats import ParseError, canonical, detect_format, parse, parse_ba, parse_native, print_ba, print_native
from procred.generators import random_nfa
from procred.oracle import metrics

FIG1C_TEXT = """\
@SRA fig1c
%Initial q0
%Final q7
%Registers 1 2
q0 x _/1 q12
q0 y _/2 q12
q12 a */* q34
q34 c 1/1 q34   # the c-loop belongs to the first invocation
q34 a */* q56
q34 b 2/2 q56
q56 x 1/_ q7
q56 y 2/_ q7
"""

BA_TEXT = """\
[s0]
a,[s0]->[s1]
b,[s1]->[s2]
a,[s1]->[s1]
b,[s2]->[s0]
[s2]
"""


def test_parse_fig1c():
    a = parse_native(FIG1C_TEXT)
    assert isinstance(a, Sra)
    assert len(a.states) == 5 and len(a.transitions) == 8
    assert a.registers == {1, 2}
    assert canonical(a) == canonical(fig1c())


def test_epsilon_only():
    a = parse_native("@NFA eps\n%Initial s\n%Final s\n")
    assert accepts(a, []) and a.transitions == frozenset()


def test_nfa_lines_in_sra_file_are_plain():
    a = parse_native("@SRA m\n%Initial p\n%Final q\np a q\n")
    (t,) = a.transitions
    assert (t.test, t.set) == (BOT, BOT)


@pytest.mark.parametrize("text, line, column", [
    ("@SRA x\n%Initial q0\nq0 a */1 q1\n", 3, 6),
    ("@SRA x\n%Initial q0\nq0 a 1/z q1\n", 3, 8),
    ("@SRA x\n%Initial q0\nq0 a 1-1 q1\n", 3, 6),
    ("@NFA x\n%Initial q0\nq0 a 1/1 q1\n", 3, 6),
    ("@NFA x\n%Initial q0\nq0 a\n", 3, 1),
    ("%Initial q0\n", 1, 1),
    ("@NFA x\n%Bogus q0\n", 2, 1),
    ("@NFA x\n%Initial q0\n@NFA y\n", 3, 1),
])
def test_parse_errors_are_located(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_native(text)
    assert (exc.value.line, exc.value.column) == (line, column)


def test_undeclared_register():
    with pytest.raises(ParseError) as exc:
        parse_native("@SRA x\n%Initial p\n%Registers 1\np a _/2 q\n")
    assert exc.value.line == 4


def test_missing_initial():
    with pytest.raises(ParseError):
        parse_native("@NFA x\np a q\n")


def test_ba_single_word():
    a = parse_ba("[0]\na,[0]->[1]\n[1]")
    assert len(a.states) == 2
    assert language(a, 3) == {("a",)}


def test_ba_without_final_warns():
    with pytest.warns(UserWarning):
        a = parse_ba("[0]\na,[0]->[1]\n")
    assert language(a, 3) == frozenset()


@pytest.mark.parametrize("text", ["[0]\na,[0]-[1]\n", "[0]\nhello\n", "[0\n"])
def test_ba_malformed(text):
    with pytest.raises(ParseError):
        parse_ba(text)


def test_ba_fixture_through_native():
    a = parse_ba(BA_TEXT)
    b = parse_native(print_native(a, "x"))
    assert canonical(b) == canonical(a)
    assert language(b, 7) == language(a, 7)
    assert metrics(b).transitions == 4


def test_detect_format():
    assert detect_format(FIG1C_TEXT) == "native"
    assert detect_format("\n\n" + BA_TEXT) == "ba"
    assert canonical(parse(BA_TEXT)) == canonical(parse_ba(BA_TEXT))


def test_ba_rejects_register_transitions():
    with pytest.raises(ValueError):
        print_ba(fig1c())


def _expressible(a):
    """The parts of an automaton both text formats can carry: transitions and terminals by name."""
    return canonical(a)[4:]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_native_round_trip(seed):
    rng = random.Random(seed)
    for a in (random_sra(rng), random_nfa(rng.randint(1, 8), 3, 0.3, rng)):
        text = print_native(a, "r")
        b = parse_native(text)
        assert _expressible(b) == _expressible(a)
        c = parse_native(print_native(b, "r"))
        assert canonical(c) == canonical(b)
        body = [l for l in text.splitlines() if l and l[0] not in "@%"]
        assert metrics(b).transitions == len(body)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_ba_round_trip(seed):
    rng = random.Random(seed)
    a = random_nfa(rng.randint(1, 8), 3, 0.3, rng)
    b = parse_ba(print_ba(a))
    assert _expressible(b) == _expressible(a)
    assert canonical(parse_ba(print_ba(b))) == canonical(b)
