"""Executable constructions and exhaustive searches for VC-dimensions of small NFAs."""

from .automata import (
    Dfa,
    FiniteLanguage,
    LengthTrace,
    Nfa,
    accepts,
    all_words,
    count_accepting_paths,
    index_word,
    minimal_partial_dfa,
    render,
    residual,
    state_complexity,
    trace,
    unary_exact_lengths,
    word_index,
)
from .constructions import (
    CphParams,
    ColumnLabeledNfa,
    SchematicAutomaton,
    build_schematic,
    closed_walk_column_sequences,
    cp_bound,
    cph_construct,
    cph_params,
    do_better_n3,
    hyde_witness,
)
from .enumeration import BudgetExceeded, SearchBudget, TraceSet, enumerate_traces
from .search import (
    ShatterReport,
    an_nondet,
    is_shattered,
    lower_vc,
    max_an_words,
    min_full_shatter_states,
    monotonicity_probe,
    sep,
    sep_max,
    shatter_report,
    similarity_profile,
    upper_vc,
)

__version__ = "0.1.0"

__all__ = [
    "accepts",
    "all_words",
    "an_nondet",
    "BudgetExceeded",
    "build_schematic",
    "closed_walk_column_sequences",
    "ColumnLabeledNfa",
    "count_accepting_paths",
    "cp_bound",
    "cph_construct",
    "cph_params",
    "CphParams",
    "Dfa",
    "do_better_n3",
    "enumerate_traces",
    "FiniteLanguage",
    "hyde_witness",
    "index_word",
    "is_shattered",
    "LengthTrace",
    "lower_vc",
    "max_an_words",
    "min_full_shatter_states",
    "minimal_partial_dfa",
    "monotonicity_probe",
    "Nfa",
    "render",
    "residual",
    "SchematicAutomaton",
    "SearchBudget",
    "sep",
    "sep_max",
    "shatter_report",
    "ShatterReport",
    "similarity_profile",
    "state_complexity",
    "trace",
    "TraceSet",
    "unary_exact_lengths",
    "upper_vc",
    "word_index",
]
