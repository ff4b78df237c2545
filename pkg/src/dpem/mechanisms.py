"""Noise samplers, truncation, and private sparse selection.

The noisy hard-thresholding (peeling) routine here is the privacy-critical
primitive: it selects ``s`` coordinates of a vector by noisy magnitude and
releases noisy values on the selected support.  All randomness flows through
a :class:`NoiseOracle`, whose ``silent`` mode turns every draw into an exact
zero so algorithms can be compared bit-for-bit against noiseless references.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PrivacyBudget",
    "NoiseOracle",
    "SparseSelection",
    "derive_seed",
    "clamp_scalar",
    "clamp_vector",
    "sample_laplace",
    "sample_gaussian",
    "noisy_ht_scale",
    "noisy_hard_threshold",
]

# Largest magnitude a centered-uniform draw may take before the Laplace
# inverse CDF would hit log(0).
_UNIFORM_CAP = float(np.nextafter(0.5, 0.0))


def derive_seed(*parts) -> int:
    """Stable 64-bit seed derived from a tuple of ints/floats/strings.

    Used to give every (experiment, sweep value, repetition) cell its own
    independent random stream without coordination.
    """
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(repr(part).encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "big")


@dataclass(frozen=True)
class PrivacyBudget:
    """An (epsilon, delta) pair governing all noise calibration."""

    epsilon: float
    delta: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")


class NoiseOracle:
    """Seeded random stream with a test-only silent mode.

    Identical ``(seed, mode)`` and call sequence reproduce the identical
    stream.  In ``silent`` mode every draw is exactly ``0.0``; the mode
    exists so noiseless oracle-equivalence tests can run through the same
    code path as production, and is never the default.

    An oracle is single-owner: concurrent runs must each derive their own
    via :meth:`spawn`.
    """

    def __init__(self, seed: int, mode: str = "live"):
        if mode not in ("live", "silent"):
            raise ValueError(f"mode must be 'live' or 'silent', got {mode!r}")
        self.seed = int(seed)
        self.mode = mode
        self._rng = np.random.default_rng(self.seed)

    @property
    def silent(self) -> bool:
        return self.mode == "silent"

    def standard_normal(self, size=None):
        """One (or ``size``) standard normal draw; zeros when silent."""
        if self.silent:
            return 0.0 if size is None else np.zeros(size)
        return self._rng.standard_normal(size)

    def uniform_centered(self, size=None):
        """Uniform draw on [-1/2, 1/2); zeros when silent."""
        if self.silent:
            return 0.0 if size is None else np.zeros(size)
        return self._rng.random(size) - 0.5

    def spawn(self, *tags) -> "NoiseOracle":
        """Independent child oracle keyed by ``tags``, same mode."""
        return NoiseOracle(derive_seed(self.seed, *tags), self.mode)

    def __repr__(self) -> str:
        return f"NoiseOracle(seed={self.seed}, mode={self.mode!r})"


@dataclass(frozen=True)
class SparseSelection:
    """Output of a sparse selection: ordered support plus a dense vector.

    ``values`` is zero everywhere off ``support``; ``support`` preserves
    selection order.
    """

    support: np.ndarray
    values: np.ndarray


def clamp_scalar(x: float, T: float) -> float:
    """Project ``x`` onto [-T, T]."""
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    return min(max(x, -T), T)


def clamp_vector(v, T: float) -> np.ndarray:
    """Coordinate-wise projection onto the ell-infinity ball of radius T."""
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("v must have finite coordinates")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    return np.clip(v, -T, T)


def _laplace_from_uniform(scale: float, u):
    # Inverse CDF: u in (-1/2, 1/2) -> -scale * sign(u) * log(1 - 2|u|).
    # Exact, portable, no rejection loop; u = 0 maps to exactly 0.
    a = np.minimum(np.abs(u), _UNIFORM_CAP)
    return -scale * np.sign(u) * np.log1p(-2.0 * a)


def sample_laplace(scale: float, oracle: NoiseOracle, size=None):
    """Zero-mean Laplace draw(s) with the given scale parameter b.

    Density (1/2b) exp(-|x|/b).  Silent oracles yield exact zeros.
    """
    if not (scale > 0 and math.isfinite(scale)):
        raise ValueError(f"scale must be positive and finite, got {scale}")
    return _laplace_from_uniform(scale, oracle.uniform_centered(size))


def sample_gaussian(std_dev: float, oracle: NoiseOracle, size=None):
    """Zero-mean Gaussian draw(s) with the given standard deviation."""
    if not (std_dev > 0 and math.isfinite(std_dev)):
        raise ValueError(f"std_dev must be positive and finite, got {std_dev}")
    return std_dev * oracle.standard_normal(size)


def noisy_ht_scale(lam: float, s: int, budget: PrivacyBudget) -> float:
    """Per-round Laplace scale used by :func:`noisy_hard_threshold`.

    Equals lam * 2 * sqrt(3 * s * ln(1/delta)) / epsilon, where ``lam`` is
    the caller-certified ell-infinity sensitivity of the input vector.
    Natural logarithm throughout.
    """
    if lam < 0 or not math.isfinite(lam):
        raise ValueError(f"lam must be a finite nonnegative real, got {lam}")
    if s < 1:
        raise ValueError(f"s must be a positive integer, got {s}")
    scale = lam * 2.0 * math.sqrt(3.0 * s * math.log(1.0 / budget.delta)) / budget.epsilon
    return scale


def noisy_hard_threshold(
    v,
    s: int,
    lam: float,
    budget: PrivacyBudget,
    oracle: NoiseOracle,
) -> SparseSelection:
    """Private sparse selection by noisy peeling.

    Runs ``s`` rounds; round ``i`` draws a fresh d-vector of i.i.d. Laplace
    noise at scale :func:`noisy_ht_scale` and appends the unselected index
    maximizing ``|v_j| + w_ij`` to the support (ties: lowest index).  A final
    Laplace d-vector is added to ``v`` before restricting to the support.

    The output support has cardinality exactly ``s``; off-support
    coordinates are exactly zero.  ``s > d`` is rejected; ``s == d`` selects
    every coordinate.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"v must be one-dimensional, got shape {v.shape}")
    d = v.size
    if not 1 <= s:
        raise ValueError(f"s must be at least 1, got {s}")
    if s > d:
        raise ValueError(f"s must not exceed the dimension d ({s} > {d})")
    scale = noisy_ht_scale(lam, s, budget)

    magnitudes = np.abs(v)
    support = np.empty(s, dtype=int)
    available = np.ones(d, dtype=bool)
    for i in range(s):
        w = _laplace_from_uniform(scale, oracle.uniform_centered(d))
        scores = np.where(available, magnitudes + w, -np.inf)
        j = int(np.argmax(scores))  # argmax takes the lowest index on ties
        support[i] = j
        available[j] = False

    w_final = _laplace_from_uniform(scale, oracle.uniform_centered(d))
    values = np.zeros(d)
    values[support] = v[support] + w_final[support]
    return SparseSelection(support=support, values=values)
