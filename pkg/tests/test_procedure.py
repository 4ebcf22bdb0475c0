import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import language, random_simgraph
from procred.automata import BOT, STAR, Sra, SraTransition, lift_nfa, signatures
from procred.generators import figure1_nfa, from_edges, random_nfa
from procred.oracle import equivalent_bounded, equivalent_exact, is_well_nested
from procred.procedure import create_procedure, create_procedure_transitions, invocation_ids, new_id_symbol, pick, procedure_states
from procred.search import SearchConfig, reduce
from procred.simgraph import InvalidSimilarityGraph, SimilarityGraph, gain
from test_simgraph import FIG1_PATH, fig3, fig5


def labels(a):
    """Transitions as (src name, symbol, test, set, dst name)."""
    return {(a.name(t.src), t.symbol, t.test, t.set, a.name(t.dst)) for t in a.transitions}


def test_pick():
    assert pick({1, 2}) == 1
    assert pick({7}) == 7
    with pytest.raises(ValueError):
        pick(set())


def test_new_id_symbol():
    assert new_id_symbol(set()) == 0
    assert new_id_symbol({0}) == 1
    assert new_id_symbol({0, 2}) == 1


def test_fig1_create_procedure():
    a = lift_nfa(figure1_nfa())
    g = SimilarityGraph.induced(a, FIG1_PATH)
    b = create_procedure(a, g)
    assert len(b.states) == 5
    assert len(b.transitions) == 8
    assert b.registers == {0, 1}
    pmap = procedure_states(a, g)
    p12, p34, p56 = pmap[1], pmap[3], pmap[5]
    assert (0, "x", BOT, 0, p12) in b.transitions
    assert (0, "y", BOT, 1, p12) in b.transitions
    assert (p34, "c", 0, 0, p34) in b.transitions
    assert (p34, "b", 1, 1, p56) in b.transitions
    assert (p56, "y", 1, BOT, 7) in b.transitions
    assert (p12, "a", STAR, STAR, p34) in b.transitions
    assert equivalent_exact(a, b).equal


def test_fresh_ids_are_singletons():
    a = lift_nfa(figure1_nfa())
    ids, registers = invocation_ids(a, SimilarityGraph.induced(a, FIG1_PATH))
    assert ids[1] == ids[3] == ids[5] == {0}
    assert ids[2] == ids[4] == ids[6] == {1}
    assert registers == {0, 1}


def test_minimal_merge():
    # two parallel a-steps; merging one pair drops one transition and one state
    a = lift_nfa(from_edges([(0, "x", 1), (0, "y", 2), (1, "a", 3), (2, "a", 3), (3, "z", 4)], {0}, {4}))
    g = SimilarityGraph.induced(a, [(1, 2)])
    b = create_procedure(a, g)
    assert len(b.states) == len(a.states) - 1
    assert len(a.transitions) - len(b.transitions) == gain(a, g)


def test_fig3_exit_expansion():
    a = fig3()
    g = SimilarityGraph.induced(a, [(1, 2), (3, 4)])
    b = create_procedure(a, g)
    p34 = procedure_states(a, g)[3]
    assert (p34, "b", 0, 0, 5) in b.transitions
    assert (p34, "b", 1, 1, 5) in b.transitions
    assert len(a.transitions) - len(b.transitions) == gain(a, g) == 0
    assert equivalent_exact(a, b).equal


def test_fig4_mixed_common_pair():
    a = Sra(
        states=range(8), alphabet="xyabc", registers={0},
        transitions=[(0, "x", BOT, 0, 1), (1, "a", STAR, STAR, 3), (3, "b", 0, BOT, 7),
                     (0, "y", BOT, BOT, 2), (2, "a", BOT, BOT, 4), (4, "c", BOT, BOT, 7)],
        initial={0}, final={7},
    )
    g = SimilarityGraph.induced(a, [(1, 2), (3, 4)])
    b = create_procedure(a, g)
    pmap = procedure_states(a, g)
    a_steps = [t for t in b.transitions if t.symbol == "a"]
    assert a_steps == [SraTransition(pmap[1], "a", STAR, STAR, pmap[3])]
    assert equivalent_exact(a, b).equal


def test_fig6_switch_transitions():
    a = fig5()
    g = SimilarityGraph.induced(a, [(3, 4)])
    ids, _ = invocation_ids(a, g)
    assert ids[4] == {2}
    b = create_procedure(a, g)
    p = procedure_states(a, g)[3]
    assert (p, "m", 1, 2, p) in b.transitions
    assert (p, "n", 2, 0, p) in b.transitions


def test_create_procedure_transitions_keeps_invocations():
    a = lift_nfa(figure1_nfa())
    g = SimilarityGraph.induced(a, FIG1_PATH)
    ids, _ = invocation_ids(a, g)
    pmap = procedure_states(a, g)
    b = create_procedure_transitions(a, g, ids, pmap)
    assert a.states < b.states
    assert a.transitions < b.transitions


def test_invalid_graph_is_rejected():
    a = lift_nfa(figure1_nfa())
    with pytest.raises(InvalidSimilarityGraph):
        create_procedure(a, SimilarityGraph.induced(a, [(1, 1)]))


def test_shared_infix_language():
    # 12 states: two branches sharing the infix abcd
    edges = [(0, "x", 1), (1, "a", 2), (2, "b", 3), (3, "c", 4), (4, "d", 5), (5, "x", 11),
             (0, "y", 6), (6, "a", 7), (7, "b", 8), (8, "c", 9), (9, "d", 10), (10, "y", 11)]
    a = lift_nfa(from_edges(edges, {0}, {11}))
    g = SimilarityGraph.induced(a, [(1, 6), (2, 7), (3, 8), (4, 9), (5, 10)])
    b = create_procedure(a, g)
    assert language(b, 6) == language(a, 6) == {tuple("xabcdx"), tuple("yabcdy")}
    assert equivalent_bounded(a, b, 14).equal
    assert len(a.transitions) - len(b.transitions) == gain(a, g) == 4


def _reduced_corpus(rng):
    """Random automata, some already carrying procedures from earlier iterations."""
    a = lift_nfa(random_nfa(rng.randint(4, 10), rng.randint(1, 3), rng.uniform(0.15, 0.4), rng))
    steps = rng.randint(0, 2)
    if steps:
        a, _ = reduce(a, SearchConfig(max_iterations=steps, enable_postprocess=False))
    return a


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_gain_accounting_and_language(seed):
    rng = random.Random(seed)
    a = _reduced_corpus(rng)
    g = random_simgraph(a, rng)
    if g is None:
        return
    b = create_procedure(a, g)
    assert len(a.transitions) - len(b.transitions) == gain(a, g)
    assert len(b.states) == len(a.states) - len(g.path)
    assert all(t.src in b.states and t.dst in b.states for t in b.transitions)
    assert equivalent_exact(a, b).equal
    assert is_well_nested(b, "states")


def test_ids_reuse_signature():
    a = fig3()
    g = SimilarityGraph.induced(a, [(1, 2), (3, 4)])
    ids, registers = invocation_ids(a, g)
    sig = signatures(a)
    assert ids[1] == sig[1] == {0, 1}
    assert ids[2] == sig[2] == {2}
    assert registers == a.registers
