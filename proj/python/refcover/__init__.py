"""Reference-coverage toolkit for machine translation evaluation."""

from refcover._core import (
    BleuScore,
    ClusterModel,
    DataError,
    ParseTree,
    RankPair,
    UsageError,
    assign_codes,
    bootstrap_tau_significance,
    canonical_form,
    corpus_bleu,
    da_to_relative_ranking,
    decision_flips,
    delta_bow,
    ds_bow,
    ds_tree,
    extract_ngrams,
    find_unrewarded_ngrams,
    kendall_tau_rr,
    kmeans,
    parse_ptb,
    pearson,
    prefix_codes,
    prune_depth,
    select_top_half,
    sentence_bleu,
    split_protocol,
    strip_codes,
    strip_leaves,
    student_t_sf,
    tokenize_v13a,
    tree_kernel,
    tree_similarity,
    williams_test,
)

__version__ = "0.1.0"

__all__ = [
    "BleuScore",
    "ClusterModel",
    "DataError",
    "ParseTree",
    "RankPair",
    "UsageError",
    "assign_codes",
    "bootstrap_tau_significance",
    "canonical_form",
    "corpus_bleu",
    "da_to_relative_ranking",
    "decision_flips",
    "delta_bow",
    "ds_bow",
    "ds_tree",
    "extract_ngrams",
    "find_unrewarded_ngrams",
    "kendall_tau_rr",
    "kmeans",
    "parse_ptb",
    "pearson",
    "prefix_codes",
    "prune_depth",
    "select_top_half",
    "sentence_bleu",
    "split_protocol",
    "strip_codes",
    "strip_leaves",
    "student_t_sf",
    "tokenize_v13a",
    "tree_kernel",
    "tree_similarity",
    "williams_test",
]
