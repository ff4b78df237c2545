"""Regression with missing covariates: generator, fill-in vector, gradients.

Model: y = <x, beta> + e with x ~ N(0, I_d), e ~ N(0, sigma^2); each
coordinate of x is observed independently with probability 1 - p
(z_ij = 1 when observed) and x_obs = z * x.
"""

from __future__ import annotations

import math

import numpy as np

from ..mechanisms import NoiseOracle
from .types import ModelSpec, RmcBatch

__all__ = [
    "generate_rmc",
    "rmc_mbeta",
    "rmc_grad",
    "rmc_truncated_grad",
    "rmc_sensitivity",
]


def generate_rmc(spec: ModelSpec, n: int, oracle: NoiseOracle) -> RmcBatch:
    """Draw n i.i.d. triples (x_obs, z, y) under coordinate-wise missingness."""
    if spec.kind != "rmc":
        raise ValueError(f"spec.kind must be 'rmc', got {spec.kind!r}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if spec.true_beta is None:
        raise ValueError("spec.true_beta is required to generate data")
    x = np.atleast_2d(oracle.standard_normal((n, spec.d)))
    e = spec.sigma * np.atleast_1d(oracle.standard_normal(n))
    y = x @ spec.true_beta + e
    u = np.atleast_2d(oracle.uniform_centered((n, spec.d)))
    z = (u + 0.5 >= spec.missing_prob).astype(float)
    return RmcBatch(z * x, z, y)


def rmc_mbeta(beta, batch: RmcBatch, sigma: float) -> np.ndarray:
    """Conditional-mean fill-in of the missing covariates, one row per sample.

    m = x_obs + (y - <beta, x_obs>) / (sigma^2 + ||(1-z)*beta||^2) * (1-z)*beta.
    The denominator is at least sigma^2 > 0.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    beta = np.asarray(beta, dtype=float)
    missing = 1.0 - batch.z
    masked_beta = missing * beta
    denom = sigma**2 + np.sum(masked_beta**2, axis=1)
    coef = (batch.y - batch.x_obs @ beta) / denom
    return batch.x_obs + coef[:, None] * masked_beta


def _grad_terms(beta, batch, sigma, T):
    # Shared term assembly; T = None means no clamping.  The four terms are
    # y*m, diag(1-z)*beta, m*(m^T beta), and the missing-coordinate correction
    # n*(n^T beta) with n = (1-z)*m.  Term structure is kept identical between
    # the raw and clamped paths so that T = inf reproduces the raw gradient
    # bit-for-bit.
    beta = np.asarray(beta, dtype=float)
    missing = 1.0 - batch.z
    m = rmc_mbeta(beta, batch, sigma)
    nn = missing * m
    if T is None:
        cy, cm, cnn = batch.y, m, nn
        cmb, cnnb = m @ beta, nn @ beta
    else:
        cy = np.clip(batch.y, -T, T)
        cm = np.clip(m, -T, T)
        cnn = np.clip(nn, -T, T)
        cmb = np.clip(m @ beta, -T, T)
        cnnb = np.clip(nn @ beta, -T, T)
    clamped_part = cy[:, None] * cm - cm * cmb[:, None] + cnn * cnnb[:, None]
    diag_part = missing * beta
    return clamped_part, diag_part


def rmc_grad(beta, batch: RmcBatch, sigma: float) -> np.ndarray:
    """Sample gradient (1/n) sum_i [y_i m_i - K_i beta].

    K_i = diag(1-z_i) + m_i m_i^T - n_i n_i^T is never materialized; the
    product K_i beta is computed from its rank-structured form.
    """
    if len(batch) == 0:
        raise ValueError("batch must be nonempty")
    clamped_part, diag_part = _grad_terms(beta, batch, sigma, None)
    return np.mean(clamped_part - diag_part, axis=0)


def rmc_truncated_grad(beta, batch: RmcBatch, sigma: float, T: float) -> np.ndarray:
    """Truncated gradient with y, m, m^T beta, n, and n^T beta clamped.

    (1/n) sum_i [clamp(y_i) clamp(m_i) - diag(1-z_i) beta
                 - clamp(m_i) clamp(m_i^T beta) + clamp(n_i) clamp(n_i^T beta)];
    the diag(1-z) beta term is left unclamped.
    """
    if len(batch) == 0:
        raise ValueError("batch must be nonempty")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    clamped_part, diag_part = _grad_terms(beta, batch, sigma, T)
    return np.mean(clamped_part - diag_part, axis=0)


def rmc_truncated_grad_clamped_part(beta, batch: RmcBatch, sigma: float, T: float) -> np.ndarray:
    """The three clamped terms of the truncated gradient, diag(1-z) beta excluded.

    This is the portion whose one-record sensitivity the 6 eta T^2 N0 / n
    constant certifies; the excluded term depends on the data only through z.
    """
    if len(batch) == 0:
        raise ValueError("batch must be nonempty")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    clamped_part, _ = _grad_terms(beta, batch, sigma, T)
    return np.mean(clamped_part, axis=0)


def rmc_sensitivity(T: float, eta: float, N0: int, n: int) -> float:
    """Certified ell-infinity sensitivity 6 eta T^2 N0 / n of the gradient step."""
    if not (T > 0 and math.isfinite(T)):
        raise ValueError(f"T must be positive and finite, got {T}")
    if eta < 0:
        raise ValueError(f"eta must be nonnegative, got {eta}")
    if N0 < 1 or n < 1:
        raise ValueError("N0 and n must be positive integers")
    return 6.0 * eta * T**2 * N0 / n
