"""Procedure-based reduction of nondeterministic finite automata.

An NFA is lifted to a single-register automaton (SRA); pairs of similar
sub-automata are then folded into one shared "procedure" whose callers are
told apart by the value written to the register.
"""
from .automata import (
    BOT,
    STAR,
    AutomatonError,
    Configuration,
    Nfa,
    NfaTransition,
    Sra,
    SraTransition,
    UnknownSymbolError,
    accepts,
    induced_nfa,
    lift_nfa,
    normalize_terminals,
    reach,
    signatures,
    trim,
)
from .formats import ParseError, parse, parse_ba, parse_native, print_ba, print_native
from .oracle import equivalent, equivalent_bounded, equivalent_exact, is_well_nested, metrics, procedures
from .postprocess import merge_register_symbols, postprocess, remove_vacuous_guards
from .procedure import create_procedure, create_procedure_transitions, new_id_symbol, pick
from .search import ReductionReport, SearchConfig, find_sim_graph, gain_d, reduce
from .simgraph import (
    InvalidSimilarityGraph,
    SelfProduct,
    SimilarityGraph,
    TransitionPartition,
    classify_transitions,
    gain,
    self_product,
    validate_simgraph,
)

__version__ = "0.1.0"
