"""Shared model types: the model descriptor and per-model sample batches.

Batches are stored struct-of-arrays: a batch of n samples holds (n, d) and
(n,) arrays rather than n per-sample objects, so the gradient operations
stay vectorized.  Slicing a batch returns a batch of the same kind.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ModelSpec", "GmmBatch", "MorBatch", "RmcBatch"]

MODEL_KINDS = ("gmm", "mor", "rmc")


@dataclass(frozen=True)
class ModelSpec:
    """Which latent-variable model, its dimension, and its noise level.

    ``true_beta`` is only consulted by the data generators; estimation code
    never reads it.  ``missing_prob`` is the per-coordinate missingness
    probability and applies to the rmc model only.
    """

    kind: str
    d: int
    sigma: float
    true_beta: np.ndarray | None = None
    missing_prob: float = 0.0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"kind must be one of {MODEL_KINDS}, got {self.kind!r}")
        if self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0.0 <= self.missing_prob < 1.0:
            raise ValueError(f"missing_prob must lie in [0, 1), got {self.missing_prob}")
        if self.true_beta is not None:
            beta = np.asarray(self.true_beta, dtype=float)
            if beta.shape != (self.d,):
                raise ValueError(f"true_beta must have shape ({self.d},), got {beta.shape}")
            if not np.all(np.isfinite(beta)):
                raise ValueError("true_beta must have finite coordinates")
            object.__setattr__(self, "true_beta", beta)


class _Batch:
    def __len__(self) -> int:
        return self._n()

    def __getitem__(self, key):
        if not isinstance(key, slice):
            raise TypeError("batches support slice indexing only")
        return self._slice(key)


@dataclass(frozen=True)
class GmmBatch(_Batch):
    """Gaussian-mixture observations: y has shape (n, d)."""

    y: np.ndarray

    def _n(self):
        return self.y.shape[0]

    @property
    def d(self):
        return self.y.shape[1]

    def _slice(self, key):
        return GmmBatch(self.y[key])


@dataclass(frozen=True)
class MorBatch(_Batch):
    """Mixture-of-regression pairs: covariates x (n, d), responses y (n,)."""

    x: np.ndarray
    y: np.ndarray

    def _n(self):
        return self.y.shape[0]

    @property
    def d(self):
        return self.x.shape[1]

    def _slice(self, key):
        return MorBatch(self.x[key], self.y[key])


@dataclass(frozen=True)
class RmcBatch(_Batch):
    """Missing-covariate triples: x_obs is zero wherever z is zero.

    ``x_obs`` (n, d) holds the observed covariates, ``z`` (n, d) the 0/1
    observation mask, ``y`` (n,) the responses.
    """

    x_obs: np.ndarray
    z: np.ndarray
    y: np.ndarray

    def _n(self):
        return self.y.shape[0]

    @property
    def d(self):
        return self.x_obs.shape[1]

    def _slice(self, key):
        return RmcBatch(self.x_obs[key], self.z[key], self.y[key])
