"""Ranking from noisy pairwise comparisons.

PD-Rank minimises an iteratively reweighted log-LSE surrogate of the 0-1
loss; each reweighted subproblem is solved by a primal-dual hybrid gradient
method. The final weights act as per-comparison confidence: values below 1
flag labels the method judges likely wrong.
"""

from ._pdrank import (
    Comparison,
    ComparisonDataset,
    ConfigError,
    ConvergenceError,
    DataError,
    DivergenceError,
    LabeledDataset,
    PDRankConfig,
    PDRankResult,
    PdhgOptions,
    borda,
    brute_force_01,
    bt_fit,
    confidence_report,
    generate_bt,
    generate_toggle,
    kendall_tau,
    label_accuracy,
    pd_rank,
    read_comparisons_csv,
    run_experiment,
    scores_to_ranking,
    spec_hash,
    zero_one_cost,
)

__all__ = [
    "Comparison",
    "ComparisonDataset",
    "ConfigError",
    "ConvergenceError",
    "DataError",
    "DivergenceError",
    "LabeledDataset",
    "PDRankConfig",
    "PDRankResult",
    "PdhgOptions",
    "borda",
    "brute_force_01",
    "bt_fit",
    "confidence_report",
    "generate_bt",
    "generate_toggle",
    "kendall_tau",
    "label_accuracy",
    "pd_rank",
    "read_comparisons_csv",
    "run_experiment",
    "scores_to_ranking",
    "spec_hash",
    "zero_one_cost",
]
