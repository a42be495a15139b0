"""Marginal rank statistics and FDR-controlled, stability-assessed feature selection."""

__version__ = "0.1.0"

from .datasets import DatasetMatrix, generate_synthetic, ingest_csv
from .exact import (
    TauDistribution,
    UNullDistribution,
    tau_mean,
    tau_pmf,
    tau_variance_equal,
    u_exact_pvalue,
    u_normal_approx_pvalue,
    u_null_distribution,
    xi_exact_pvalue,
)
from .marginal import MarginalStatistic
from .multiplicity import PValueVector, SelectionResult, bh_select, by_select, fdr_simulation
from .permutation import PermutationScheme, permutation_pvalue, pvalue_uniformity_diagnostic
from .rankstats import (
    GroupCounts,
    LabeledSample,
    RankPermutation,
    auc,
    group_counts,
    jump_count,
    mann_whitney_u,
    rank_values,
    xi_binary,
)
from .resampling import (
    SubsampleDesign,
    bootstrap_xi_with_replacement,
    build_design,
    exhaustive_u_statistic,
    resampled_auc,
    resampled_xi,
)
from .selection import MarginalTestSelector, marginal_statistics
from .stability import (
    FoldPartition,
    StabilityCurve,
    make_folds,
    stability_count,
    stability_curve,
    top_s,
)
from .streams import StreamKey, make_stream, stream_id, uniform_subset, uniform_subsets

__all__ = [
    "DatasetMatrix", "generate_synthetic", "ingest_csv",
    "TauDistribution", "UNullDistribution", "tau_mean", "tau_pmf", "tau_variance_equal",
    "u_exact_pvalue", "u_normal_approx_pvalue", "u_null_distribution", "xi_exact_pvalue",
    "MarginalStatistic",
    "PValueVector", "SelectionResult", "bh_select", "by_select", "fdr_simulation",
    "PermutationScheme", "permutation_pvalue", "pvalue_uniformity_diagnostic",
    "GroupCounts", "LabeledSample", "RankPermutation", "auc", "group_counts", "jump_count",
    "mann_whitney_u", "rank_values", "xi_binary",
    "SubsampleDesign", "bootstrap_xi_with_replacement", "build_design",
    "exhaustive_u_statistic", "resampled_auc", "resampled_xi",
    "MarginalTestSelector", "marginal_statistics",
    "FoldPartition", "StabilityCurve", "make_folds", "stability_count", "stability_curve",
    "top_s",
    "StreamKey", "make_stream", "stream_id", "uniform_subset", "uniform_subsets",
]
