"""Gaussian mixture model: generator, gradient, truncated gradient, sensitivity.

Model: y = z * beta + e with z = +/-1 equiprobable and e ~ N(0, sigma^2 I_d).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit

from ..mechanisms import NoiseOracle
from .types import GmmBatch, ModelSpec

__all__ = [
    "generate_gmm",
    "gmm_weight",
    "gmm_grad",
    "gmm_truncated_grad",
    "gmm_sensitivity",
]


def generate_gmm(spec: ModelSpec, n: int, oracle: NoiseOracle) -> GmmBatch:
    """Draw n i.i.d. observations y_i = z_i * beta + e_i."""
    if spec.kind != "gmm":
        raise ValueError(f"spec.kind must be 'gmm', got {spec.kind!r}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if spec.true_beta is None:
        raise ValueError("spec.true_beta is required to generate data")
    u = np.atleast_1d(oracle.uniform_centered(n))
    z = np.where(u >= 0.0, 1.0, -1.0)
    e = spec.sigma * np.atleast_2d(oracle.standard_normal((n, spec.d)))
    return GmmBatch(z[:, None] * spec.true_beta + e)


def gmm_weight(beta, y, sigma: float):
    """Mixing weight 1 / (1 + exp(-<beta, y> / sigma^2)).

    Accepts a single observation (d,) or a stack (n, d); returns a scalar or
    an (n,) array accordingly.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    inner = np.asarray(y, dtype=float) @ np.asarray(beta, dtype=float)
    return expit(inner / sigma**2)


def gmm_grad(beta, batch: GmmBatch, sigma: float) -> np.ndarray:
    """Sample gradient (1/n) sum_i (2 w(y_i) - 1) y_i - beta."""
    if len(batch) == 0:
        raise ValueError("batch must be nonempty")
    beta = np.asarray(beta, dtype=float)
    w = gmm_weight(beta, batch.y, sigma)
    return np.mean((2.0 * w - 1.0)[:, None] * batch.y, axis=0) - beta


def gmm_truncated_grad(beta, batch: GmmBatch, sigma: float, T: float) -> np.ndarray:
    """Truncated gradient (1/n) sum_i (2 w(y_i) - 1) clamp_T(y_i) - beta.

    The weight is evaluated on the untruncated observation; only the y_i
    factor is clamped.  T = inf reproduces :func:`gmm_grad` exactly.
    """
    if len(batch) == 0:
        raise ValueError("batch must be nonempty")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    beta = np.asarray(beta, dtype=float)
    w = gmm_weight(beta, batch.y, sigma)
    return np.mean((2.0 * w - 1.0)[:, None] * np.clip(batch.y, -T, T), axis=0) - beta


def gmm_sensitivity(T: float, eta: float, N0: int, n: int) -> float:
    """Certified ell-infinity sensitivity 2 eta T N0 / n of the gradient step."""
    if not (T > 0 and math.isfinite(T)):
        raise ValueError(f"T must be positive and finite, got {T}")
    if eta < 0:
        raise ValueError(f"eta must be nonnegative, got {eta}")
    if N0 < 1 or n < 1:
        raise ValueError("N0 and n must be positive integers")
    return 2.0 * eta * T * N0 / n
