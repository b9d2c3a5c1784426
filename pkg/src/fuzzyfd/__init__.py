"""Fuzzy integration of aligned tables.

The pipeline: load tables and bind their columns to shared attributes
(:mod:`fuzzyfd.tables`), embed cell values (:mod:`fuzzyfd.embedding`),
partition equivalent surface forms per attribute and rewrite them to one
representative (:mod:`fuzzyfd.matching`), then merge everything into a
single subsumption-free integrated table (:mod:`fuzzyfd.fd`). Scoring
and the scaling benchmark live in :mod:`fuzzyfd.evaluation`.
"""

from .embedding import (DictionaryEmbedder, EmbeddingProvider, NgramEmbedder,
                        RemoteEmbedder, cosine_distance)
from .errors import FuzzyFDError
from .evaluation import (BenchReport, EvaluationReport, MatchScore, bench_scaling,
                         generate_scaling_set, load_gold, matching_prf, save_gold)
from .fd import (IntegratedTable, WideTuple, fd_oracle, full_disjunction,
                 join_consistent, merge_tuples, outer_join, outer_union,
                 remove_subsumed, subsumes, write_integrated)
from .matching import (MatcherConfig, MatchResult, match_all, match_values,
                       pairwise_assign, rewrite_tables, select_representative,
                       write_match_report)
from .tables import (AlignedRelationSet, AlignmentSpec, Table, build_relation_set,
                     distinct_values, load_alignment_spec, load_relation_set,
                     load_table, make_table, project_aligned, value_counts,
                     write_table)

__version__ = "0.1.0"

__all__ = [
    "AlignedRelationSet", "AlignmentSpec", "BenchReport", "DictionaryEmbedder",
    "EmbeddingProvider", "EvaluationReport", "FuzzyFDError", "IntegratedTable",
    "MatchResult", "MatchScore", "MatcherConfig", "NgramEmbedder", "RemoteEmbedder",
    "Table", "WideTuple", "bench_scaling", "build_relation_set", "cosine_distance",
    "distinct_values", "fd_oracle", "full_disjunction", "generate_scaling_set",
    "join_consistent", "load_alignment_spec", "load_gold", "load_relation_set",
    "load_table", "make_table", "match_all", "match_values", "matching_prf",
    "merge_tuples", "outer_join", "outer_union", "pairwise_assign",
    "project_aligned", "remove_subsumed", "rewrite_tables", "save_gold",
    "select_representative", "subsumes", "value_counts", "write_integrated",
    "write_match_report", "write_table",
]
