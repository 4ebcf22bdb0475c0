import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fig1c
from oracles import shortest_difference
from procred.automata import BOT, Nfa, Sra, lift_nfa
from procred.generators import figure1_nfa, from_edges, random_nfa
from procred.oracle import (
    CAP_EXCEEDED,
    COUNTEREXAMPLE,
    EQUAL,
    default_bound,
    equivalent,
    equivalent_bounded,
    equivalent_exact,
    is_well_nested,
    metrics,
    nesting_violations,
    procedures,
)


def without_c_loop():
    a = fig1c()
    return a.replace(transitions={t for t in a.transitions if t.symbol != "c"})


def test_fig1_bounded_equal(fig1c_sra):
    assert equivalent_bounded(figure1_nfa(), fig1c_sra, 8).status == EQUAL


def test_self_equal(fig1c_sra):
    assert equivalent_bounded(fig1c_sra, fig1c_sra).equal
    assert equivalent_exact(fig1c_sra, fig1c_sra).equal


def test_missing_loop_counterexample(fig1c_sra):
    r = equivalent_bounded(fig1c_sra, without_c_loop(), 8)
    assert r.status == COUNTEREXAMPLE
    assert r.word == tuple("xacax")
    assert shortest_difference(fig1c_sra, without_c_loop(), 6) == tuple("xacax")
    assert equivalent_exact(fig1c_sra, without_c_loop()).word == tuple("xacax")


def test_fig1_exact_is_small(fig1c_sra):
    r = equivalent_exact(figure1_nfa(), fig1c_sra)
    assert r.equal and r.conclusive
    assert r.explored < 10_000


def test_epsilon_difference():
    nothing = Nfa(states={0}, alphabet="a", transitions=[], initial={0}, final=set())
    eps = Nfa(states={0}, alphabet="a", transitions=[], initial={0}, final={0})
    assert equivalent_exact(nothing, eps).word == ()
    assert equivalent_bounded(nothing, eps).word == ()


def test_cap_exceeded_falls_back(fig1c_sra):
    r = equivalent_exact(figure1_nfa(), fig1c_sra, config_cap=2)
    assert r.status == CAP_EXCEEDED and not r.conclusive
    assert equivalent(figure1_nfa(), fig1c_sra, config_cap=2).equal


def test_alphabet_mismatch():
    with pytest.raises(ValueError):
        equivalent_bounded(from_edges([(0, "a", 1)], {0}, {1}), from_edges([(0, "b", 1)], {0}, {1}))


def test_default_bound(fig1c_sra):
    assert default_bound(figure1_nfa(), fig1c_sra) == 2 * 8 + 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_counterexamples_are_shortest(seed):
    rng = random.Random(seed)
    a = random_nfa(rng.randint(3, 10), 2, 0.25, rng, normalize=False)
    # add or remove one transition to get a near-identical pair
    trans = set(a.transitions)
    if trans and rng.random() < 0.5:
        trans.discard(rng.choice(sorted(trans)))
    else:
        trans.add((rng.choice(sorted(a.states)), rng.choice(sorted(a.alphabet)), rng.choice(sorted(a.states))))
    b = Nfa(states=a.states, alphabet=a.alphabet, transitions=trans, initial=a.initial, final=a.final)
    want = shortest_difference(a, b, 8)
    exact = equivalent_exact(a, b)
    bounded = equivalent_bounded(a, b, 8)
    assert bounded.word == want
    if want is None:
        # no difference up to 8; the exact check may still find a longer one
        assert exact.equal or len(exact.word) > 8
    else:
        assert exact.word is not None and len(exact.word) == len(want)


# metrics

def test_fig1c_metrics(fig1c_sra):
    m = metrics(fig1c_sra)
    assert (m.states, m.transitions, m.registers) == (5, 8, 2)
    assert m.states_plus_registers == 7
    assert m.register_using == 6
    assert m.bits == 72 * 2 + 80 * 6


def test_lifted_metrics():
    m = metrics(lift_nfa(figure1_nfa()))
    assert m.register_using == 0
    assert m.states_plus_registers == 8
    assert m.bits == 72 * 10


# procedures and nesting

def test_fig1c_single_procedure(fig1c_sra):
    procs = procedures(fig1c_sra)
    assert procs == {frozenset({1, 2}): frozenset({1, 2, 3})}
    assert is_well_nested(fig1c_sra, "states")
    assert is_well_nested(fig1c_sra, "transitions")


def test_overlapping_procedures_are_reported():
    # Sig(1) = {0, 1}, Sig(2) = {0}, Sig(3) = {1}
    a = Sra(
        states=range(5), alphabet="xyzab", registers={0, 1},
        transitions=[(0, "x", BOT, 0, 1), (0, "y", BOT, 1, 1), (0, "z", BOT, 0, 2), (0, "a", BOT, 1, 3),
                     (1, "b", 0, BOT, 4), (1, "b", 1, BOT, 4), (2, "b", 0, BOT, 4), (3, "b", 1, BOT, 4),
                     (1, "a", 0, 0, 2), (1, "a", 1, 1, 3)],
        initial={0}, final={4},
    )
    procs = procedures(a)
    assert procs[frozenset({0})] == {1, 2}
    assert procs[frozenset({1})] == {1, 3}
    assert nesting_violations(a, "states") == [(frozenset({0}), frozenset({1}))]
    assert not is_well_nested(a, "states")
