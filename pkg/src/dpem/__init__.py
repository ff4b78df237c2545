"""Differentially private EM estimation for latent-variable models.

Sparse high-dimensional estimation runs through noisy iterative hard
thresholding; the classic low-dimensional setting runs through the Gaussian
mechanism.  Three models are built in: the symmetric two-component Gaussian
mixture, mixture of regression, and regression with missing covariates.
"""

from .em_engine import (
    EmConfig,
    Trajectory,
    fit_geometric_decay,
    gaussian_noise_std,
    gaussian_noise_variance,
    run_high_dim,
    run_low_dim,
    split_batches,
)
from .mechanisms import (
    NoiseOracle,
    PrivacyBudget,
    SparseSelection,
    clamp_scalar,
    clamp_vector,
    derive_seed,
    noisy_hard_threshold,
    noisy_ht_scale,
    sample_gaussian,
    sample_laplace,
)
from .models import (
    GmmBatch,
    ModelSpec,
    MorBatch,
    RmcBatch,
    generate_gmm,
    generate_mor,
    generate_rmc,
    gmm_grad,
    gmm_sensitivity,
    gmm_truncated_grad,
    gmm_weight,
    mor_grad,
    mor_sensitivity,
    mor_truncated_grad,
    mor_weight,
    rmc_grad,
    rmc_mbeta,
    rmc_sensitivity,
    rmc_truncated_grad,
)
from .oracle import exact_top_k, finite_diff_grad, ht_gradient_em, nonprivate_em, q_value

__version__ = "0.1.0"
