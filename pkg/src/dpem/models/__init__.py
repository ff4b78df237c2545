"""Model-specific ingredients for the private EM engines.

Each model contributes a data generator, the sample gradient of its
surrogate objective at the current iterate, a truncated gradient whose
per-record influence is bounded, and the certified sensitivity constant for
the corresponding gradient step.  The ``kind``-dispatching helpers below are
what the engines call; the per-model functions remain directly importable.
"""

from __future__ import annotations

import numpy as np

from ..mechanisms import NoiseOracle
from .gmm import generate_gmm, gmm_grad, gmm_sensitivity, gmm_truncated_grad, gmm_weight
from .mor import generate_mor, mor_grad, mor_sensitivity, mor_truncated_grad, mor_weight
from .rmc import (
    generate_rmc,
    rmc_grad,
    rmc_mbeta,
    rmc_sensitivity,
    rmc_truncated_grad,
    rmc_truncated_grad_clamped_part,
)
from .types import GmmBatch, ModelSpec, MorBatch, RmcBatch

__all__ = [
    "ModelSpec",
    "GmmBatch",
    "MorBatch",
    "RmcBatch",
    "generate",
    "raw_grad",
    "truncated_grad",
    "sensitivity",
    "noise_multiplier",
    "generate_gmm",
    "gmm_weight",
    "gmm_grad",
    "gmm_truncated_grad",
    "gmm_sensitivity",
    "generate_mor",
    "mor_weight",
    "mor_grad",
    "mor_truncated_grad",
    "mor_sensitivity",
    "generate_rmc",
    "rmc_mbeta",
    "rmc_grad",
    "rmc_truncated_grad",
    "rmc_truncated_grad_clamped_part",
    "rmc_sensitivity",
]

_GENERATORS = {"gmm": generate_gmm, "mor": generate_mor, "rmc": generate_rmc}
_RAW_GRADS = {"gmm": gmm_grad, "mor": mor_grad, "rmc": rmc_grad}
_TRUNCATED_GRADS = {"gmm": gmm_truncated_grad, "mor": mor_truncated_grad, "rmc": rmc_truncated_grad}
_SENSITIVITIES = {"gmm": gmm_sensitivity, "mor": mor_sensitivity, "rmc": rmc_sensitivity}


def generate(spec: ModelSpec, n: int, oracle: NoiseOracle):
    """Draw an n-sample batch from ``spec``'s generative model."""
    return _GENERATORS[spec.kind](spec, n, oracle)


def raw_grad(spec: ModelSpec, beta, batch) -> np.ndarray:
    """Untruncated sample gradient for ``spec``'s model."""
    return _RAW_GRADS[spec.kind](beta, batch, spec.sigma)


def truncated_grad(spec: ModelSpec, beta, batch, T: float) -> np.ndarray:
    """Truncated sample gradient; T = inf reproduces :func:`raw_grad` exactly."""
    return _TRUNCATED_GRADS[spec.kind](beta, batch, spec.sigma, T)


def sensitivity(kind: str, T: float, eta: float, N0: int, n: int) -> float:
    """Certified ell-infinity sensitivity of the eta-scaled truncated gradient step."""
    return _SENSITIVITIES[kind](T, eta, N0, n)


def noise_multiplier(kind: str, T: float) -> float:
    """Per-model ell-2 sensitivity factor for the low-dimensional Gaussian noise.

    2T for gmm, 4T^2 for mor, 6T^2 for rmc.
    """
    if kind == "gmm":
        return 2.0 * T
    if kind == "mor":
        return 4.0 * T**2
    if kind == "rmc":
        return 6.0 * T**2
    raise ValueError(f"unknown model kind {kind!r}")
