"""Evaluation harness: rank metrics, query injection, synthetic corpora."""

from .evaluate import EvalReport, QueryGroup, QueryResult, inject_and_evaluate
from .feature_io import import_external_features, read_feature_matrix, write_feature_matrix
from .ranks import (
    average_rank,
    interpolated_pr_curve,
    normalized_rank,
    precision_recall_curve,
    resolve_ties,
)
from .synth import SynthSpec, synth_corpus

__all__ = [
    "EvalReport",
    "QueryGroup",
    "QueryResult",
    "inject_and_evaluate",
    "import_external_features",
    "read_feature_matrix",
    "write_feature_matrix",
    "average_rank",
    "normalized_rank",
    "precision_recall_curve",
    "interpolated_pr_curve",
    "resolve_ties",
    "SynthSpec",
    "synth_corpus",
]
