"""Avoiding words and reset words for complete deterministic automata."""

from .automaton import (
    Automaton,
    ClassificationReport,
    NotSynchronizingError,
    ParseError,
    PreconditionError,
    StateSet,
    apply_word,
    classify,
    format_automaton,
    format_word,
    parse_automaton,
    parse_word,
    preimage,
    preimage_census,
    rank,
)
from .avoiding import (
    AvoidCompressOutcome,
    ConstructionStuck,
    InvariantError,
    Outcome,
    avoid_from,
    avoid_global,
    avoid_or_compress,
    avoid_or_compress_iter,
    avoid_subset,
    avoid_subset_or_compress,
    reduced_chain,
)
from .compression import build_pair_table, c_bound, greedy_compress_to, shortest_compress_step
from .generators import GeneratorSpec, cerny, random_automaton
from .linalg import EchelonBasis, count_vector
from .oracle import (
    OracleRefused,
    OracleResult,
    exact_shortest_avoiding,
    exact_shortest_compressing,
    exact_shortest_reset,
    min_pair_merge_for_state,
)
from .pipeline import Branch, ResetCertificate, bound_report, choose_k, compress_to_half, pipeline_reset

__version__ = "0.1.0"
