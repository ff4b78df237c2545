"""Mixture of regression: generator, gradient, truncated gradient, sensitivity.

Model: y = z * <x, beta> + e with x ~ N(0, I_d), z = +/-1 equiprobable, and
e ~ N(0, sigma^2).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit

from ..mechanisms import NoiseOracle
from .types import ModelSpec, MorBatch

__all__ = [
    "generate_mor",
    "mor_weight",
    "mor_grad",
    "mor_truncated_grad",
    "mor_sensitivity",
]


def generate_mor(spec: ModelSpec, n: int, oracle: NoiseOracle) -> MorBatch:
    """Draw n i.i.d. pairs (x_i, y_i) with y_i = z_i <x_i, beta> + e_i."""
    if spec.kind != "mor":
        raise ValueError(f"spec.kind must be 'mor', got {spec.kind!r}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if spec.true_beta is None:
        raise ValueError("spec.true_beta is required to generate data")
    x = np.atleast_2d(oracle.standard_normal((n, spec.d)))
    u = np.atleast_1d(oracle.uniform_centered(n))
    z = np.where(u >= 0.0, 1.0, -1.0)
    e = spec.sigma * np.atleast_1d(oracle.standard_normal(n))
    return MorBatch(x, z * (x @ spec.true_beta) + e)


def mor_weight(beta, x, y, sigma: float):
    """Mixing weight 1 / (1 + exp(-y <beta, x> / sigma^2))."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    inner = np.asarray(x, dtype=float) @ np.asarray(beta, dtype=float)
    return expit(np.asarray(y, dtype=float) * inner / sigma**2)


def mor_grad(beta, batch: MorBatch, sigma: float) -> np.ndarray:
    """Sample gradient (1/n) sum_i [2 w_i y_i x_i - x_i (x_i^T beta)]."""
    if len(batch) == 0:
        raise ValueError("batch must be nonempty")
    beta = np.asarray(beta, dtype=float)
    w = mor_weight(beta, batch.x, batch.y, sigma)
    proj = batch.x @ beta
    terms = (2.0 * w * batch.y)[:, None] * batch.x - batch.x * proj[:, None]
    return np.mean(terms, axis=0)


def mor_truncated_grad(beta, batch: MorBatch, sigma: float, T: float) -> np.ndarray:
    """Truncated gradient with y_i, x_i, and x_i^T beta clamped separately.

    (1/n) sum_i [2 w_i clamp(y_i) clamp(x_i) - clamp(x_i) clamp(x_i^T beta)];
    the weight w_i uses the untruncated (x_i, y_i).
    """
    if len(batch) == 0:
        raise ValueError("batch must be nonempty")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    beta = np.asarray(beta, dtype=float)
    w = mor_weight(beta, batch.x, batch.y, sigma)
    cy = np.clip(batch.y, -T, T)
    cx = np.clip(batch.x, -T, T)
    cproj = np.clip(batch.x @ beta, -T, T)
    terms = (2.0 * w * cy)[:, None] * cx - cx * cproj[:, None]
    return np.mean(terms, axis=0)


def mor_sensitivity(T: float, eta: float, N0: int, n: int) -> float:
    """Certified ell-infinity sensitivity 4 eta T^2 N0 / n of the gradient step."""
    if not (T > 0 and math.isfinite(T)):
        raise ValueError(f"T must be positive and finite, got {T}")
    if eta < 0:
        raise ValueError(f"eta must be nonnegative, got {eta}")
    if N0 < 1 or n < 1:
        raise ValueError("N0 and n must be positive integers")
    return 4.0 * eta * T**2 * N0 / n
