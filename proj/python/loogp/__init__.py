"""Gaussian process regression with leave-one-out scoring criteria.

Covariance parameters are estimated by maximizing cross-validation criteria
built from scoring rules (PRESS, log predictive density, CRPS) or the log
marginal likelihood, with criterion gradients computed by an adjoint pass in
O(n^3 + q n^2) time and O(n^2) extra storage.
"""

from ._core import (
    Dataset,
    EstimatorConfig,
    EstimationFailedError,
    FitCriterion,
    FitResult,
    InvalidInputError,
    KernelFamily,
    KernelParams,
    LooMoments,
    LooWorkspace,
    ScoreDomainError,
    ScoreGradient,
    ScoringRule,
    SingularCovarianceError,
    StartRecord,
    adjoint_loo,
    adjoint_loo_general,
    build_covariance,
    contract_gradient,
    criterion,
    criterion_with_gradient,
    estimate,
    generate_design,
    kernel_eval,
    lml_gradient,
    load_dataset_csv,
    log_marginal_likelihood,
    loo_moments,
    naive_gradient,
    param_derivative,
    precompute,
    sample_gp,
    save_dataset_csv,
    score_point,
    score_point_grad,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "EstimatorConfig",
    "EstimationFailedError",
    "FitCriterion",
    "FitResult",
    "InvalidInputError",
    "KernelFamily",
    "KernelParams",
    "LooMoments",
    "LooWorkspace",
    "ScoreDomainError",
    "ScoreGradient",
    "ScoringRule",
    "SingularCovarianceError",
    "StartRecord",
    "adjoint_loo",
    "adjoint_loo_general",
    "build_covariance",
    "contract_gradient",
    "criterion",
    "criterion_with_gradient",
    "estimate",
    "generate_design",
    "kernel_eval",
    "lml_gradient",
    "load_dataset_csv",
    "log_marginal_likelihood",
    "loo_moments",
    "naive_gradient",
    "param_derivative",
    "precompute",
    "sample_gp",
    "save_dataset_csv",
    "score_point",
    "score_point_grad",
]
