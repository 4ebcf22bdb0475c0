import random

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fig1c
from oracles import fixpoint_signatures, language
from procred.automata import BOT, STAR, Sra, signatures
from procred.generators import random_nfa
from procred.oracle import equivalent
from procred.postprocess import (
    merge_register_symbols,
    postprocess,
    remove_vacuous_guards,
    symbol_partition,
    vacuous_guard_sets,
)
from procred.search import SearchConfig, reduce


def two_procedures():
    """Two unrelated procedures using {0, 1} and {2, 3}."""
    return Sra(
        states=range(6), alphabet="xyuvab", registers={0, 1, 2, 3},
        transitions=[(0, "x", BOT, 0, 1), (0, "y", BOT, 1, 1), (1, "a", STAR, STAR, 2),
                     (2, "x", 0, BOT, 5), (2, "y", 1, BOT, 5),
                     (0, "u", BOT, 2, 3), (0, "v", BOT, 3, 3), (3, "b", STAR, STAR, 4),
                     (4, "u", 2, BOT, 5), (4, "v", 3, BOT, 5)],
        initial={0}, final={5},
    )


def guarded(extra=()):
    """State 1 sees {0, 1}; its b-step to 2 is split into one guard per symbol."""
    return Sra(
        states=range(4), alphabet="xyb", registers={0, 1},
        transitions=[(0, "x", BOT, 0, 1), (0, "y", BOT, 1, 1), (2, "x", 0, BOT, 3), (2, "y", 1, BOT, 3),
                     *extra],
        initial={0}, final={3},
    )


def test_partition_of_two_procedures():
    a = two_procedures()
    sig = fixpoint_signatures(a)
    assert sig[1] == {0, 1} and sig[3] == {2, 3}
    part = symbol_partition(a)
    assert part.classes == ((0, 1), (2, 3))
    assert part.mapping == {0: 0, 1: 1, 2: 0, 3: 1}


def test_merge_two_procedures():
    a = two_procedures()
    b = merge_register_symbols(a)
    assert b.registers == {0, 1}
    assert (4, "u", 0, BOT, 5) in b.transitions
    assert (0, "v", BOT, 1, 3) in b.transitions
    assert language(b, 5) == language(a, 5)


def test_merge_fixpoints():
    a = fig1c()
    assert merge_register_symbols(a) is a
    empty = Sra(states={0}, alphabet="a", registers=(), transitions=[(0, "a", BOT, BOT, 0)], initial={0}, final={0})
    assert merge_register_symbols(empty) is empty


def test_merge_keeps_a_class_apart_when_a_dead_guard_would_fire():
    # state 3 sees only {2}, but tests 0 on a dead branch; 2 -> 0 would wake it up
    a = Sra(
        states=range(6), alphabet="xyza", registers={0, 1, 2},
        transitions=[(0, "x", BOT, 0, 1), (0, "y", BOT, 1, 1), (1, "a", 0, BOT, 5), (1, "a", 1, BOT, 5),
                     (0, "z", BOT, 2, 3), (3, "a", 2, BOT, 5), (3, "x", 0, BOT, 5)],
        initial={0}, final={5},
    )
    b = merge_register_symbols(a)
    assert b.registers == a.registers
    assert equivalent(a, b).equal


def test_collapse_complete_guard_family():
    a = guarded([(1, "b", 0, 0, 2), (1, "b", 1, 1, 2)])
    b = remove_vacuous_guards(a)
    assert (1, "b", STAR, STAR, 2) in b.transitions
    assert len(a.transitions) - len(b.transitions) == 1
    assert language(b, 4) == language(a, 4)


def test_partial_family_is_kept():
    a = guarded([(1, "b", 0, 0, 2)])
    assert remove_vacuous_guards(a) == a


def test_updating_family_is_kept():
    a = guarded([(1, "b", 0, 1, 2), (1, "b", 1, 0, 2)])
    assert remove_vacuous_guards(a) == a


def test_family_at_a_state_also_reached_with_bot_is_kept():
    a = guarded([(1, "b", 0, 0, 2), (1, "b", 1, 1, 2), (0, "b", BOT, BOT, 1)])
    assert vacuous_guard_sets(a) == []
    assert remove_vacuous_guards(a) == a


def _reduced(seed):
    rng = random.Random(seed)
    a = random_nfa(rng.randint(4, 15), rng.randint(1, 4), rng.uniform(0.1, 0.4), rng)
    b, _ = reduce(a, SearchConfig(enable_postprocess=False))
    return b


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_passes_are_idempotent_monotone_and_sound(seed):
    a = _reduced(seed)
    m = merge_register_symbols(a)
    assert len(m.registers) <= len(a.registers)
    assert merge_register_symbols(m) == m
    groups = vacuous_guard_sets(a)
    sig = signatures(a)
    v = remove_vacuous_guards(a)
    assert len(a.transitions) - len(v.transitions) == sum(len(sig[r]) - 1 for r, _, _, _ in groups)
    assert remove_vacuous_guards(v) == v
    p = postprocess(a)
    assert postprocess(p) == p
    assert equivalent(a, p).equal
