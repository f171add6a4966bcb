"""Queries over straight-line programs without decompressing them."""

from .access import AccessIndex, build_access
from .balanced import BalancedIndex, build_balanced
from .errors import (
    CorruptIndex,
    CyclicInput,
    CyclicRule,
    DanglingReference,
    EmptyInput,
    GCIndexError,
    InvalidGrammarFile,
    LengthMismatch,
    NoSink,
    NotASink,
    NotCNF,
    OccurrenceOutOfRange,
    PathCountOverflow,
    PositionOutOfRange,
    UnknownNode,
)
from .grammar import (
    Grammar,
    build_balanced_grammar,
    build_grammar,
    cnf_normalize,
    expand_naive,
    prune,
    read_grammar,
    validate,
    write_grammar,
)
from .heavypath import HeavyForest, decompose, heavy_path_predecessor, triplet_search
from .index import (
    BalancedEngine,
    UnbalancedIndex,
    build_index,
    build_pathcount_index,
    load_index,
    save_index,
)
from .pathcount import InputDag, PathCountIndex, normalize_dag, parse_dag
from .rankselect import RankIndex, RankSelectIndex, SelectIndex
from .stats import QueryStats

__version__ = "0.1.0"
