"""Benchmark harness: structural scoring, manifests, and batch reports."""

from dwt.bench.manifest import BenchmarkManifest, ManifestEntry, ManifestError
from dwt.bench.metrics_client import MetricsBoundaryError, MetricsPair, MetricsResult, score_pairs
from dwt.bench.runner import EntryResult, MetricReport, compute_aggregates, run_benchmark
from dwt.bench.stats import DegenerateInput, LengthMismatch, spearman
from dwt.bench.structural import StructuralScore, label_similarity, levenshtein, structural_similarity

__all__ = [
    "BenchmarkManifest",
    "DegenerateInput",
    "EntryResult",
    "LengthMismatch",
    "ManifestEntry",
    "ManifestError",
    "MetricReport",
    "MetricsBoundaryError",
    "MetricsPair",
    "MetricsResult",
    "StructuralScore",
    "compute_aggregates",
    "label_similarity",
    "levenshtein",
    "run_benchmark",
    "score_pairs",
    "spearman",
    "structural_similarity",
]
