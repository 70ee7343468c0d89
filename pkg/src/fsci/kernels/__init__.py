from .distributions import FDist, StudentT, stars, tail_probability
from .loess import DegenerateNeighborhood, loess, loess_fit
from .moments import quantiles, weighted_mean, weighted_sd
from .regression import (
    FStatus,
    FTestResult,
    GroupEstimate,
    GroupFit,
    cluster_robust_f,
    cr1_covariance,
    hc1_covariance,
    wls_group_fit,
)
from .transforms import (
    geometric_mean,
    min_max_normalize,
    top_k_mean,
    winsorize_upper_third,
)

__all__ = [
    "DegenerateNeighborhood",
    "FDist",
    "FStatus",
    "FTestResult",
    "GroupEstimate",
    "GroupFit",
    "StudentT",
    "cluster_robust_f",
    "cr1_covariance",
    "geometric_mean",
    "hc1_covariance",
    "loess",
    "loess_fit",
    "min_max_normalize",
    "quantiles",
    "stars",
    "tail_probability",
    "top_k_mean",
    "weighted_mean",
    "weighted_sd",
    "winsorize_upper_third",
    "wls_group_fit",
]
