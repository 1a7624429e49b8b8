"""Estimators and distributional tests used as verification oracles."""

import math
from typing import Sequence

import numpy as np
from scipy import stats

from src.errors import AllInfiniteError, InvalidArgumentError


def _nonempty(values, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float).ravel()
    if array.size == 0:
        raise InvalidArgumentError(f"{name} must not be empty.")
    return array


def empirical_bernstein(samples, xs: Sequence[float]) -> np.ndarray:
    """
    Ψ̂(x) = -log((1/n) Σ e^{-x X_i}) with its delta-method standard error
    sd(e^{-x X}) / (√n · mean(e^{-x X})). Infinite samples contribute 0.

    Args:
        samples: Draws in [0, ∞].
        xs (Sequence[float]): Positive abscissae.

    Returns:
        np.ndarray: Shape (len(xs), 2), columns estimate and standard error.

    Raises:
        AllInfiniteError: If every sample is infinite.
        InvalidArgumentError: If the samples are empty or negative.
    """
    values = _nonempty(samples, "samples")
    if np.any(values < 0.0) or np.any(np.isnan(values)):
        raise InvalidArgumentError("samples must lie in [0, ∞].")
    if np.all(np.isinf(values)):
        raise AllInfiniteError(f"All {values.size} samples are infinite.")
    grid = np.asarray(xs, dtype=float)
    if np.any(grid <= 0.0):
        raise InvalidArgumentError("xs must be positive.")
    finite = np.isfinite(values)
    exponents = np.outer(grid, np.where(finite, values, 0.0))
    transforms = np.where(finite[None, :], np.exp(-exponents), 0.0)
    means = transforms.mean(axis=1)
    spreads = transforms.std(axis=1, ddof=1) if values.size > 1 else np.zeros(grid.size)
    with np.errstate(divide="ignore", invalid="ignore"):
        estimates = -np.log(means)
        errors = np.where(means > 0.0, spreads / (math.sqrt(values.size) * means), math.inf)
    return np.column_stack([estimates, errors])


def ks_two_sample(a, b) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value."""
    result = stats.ks_2samp(_nonempty(a, "a"), _nonempty(b, "b"), method="asymp")
    return float(result.statistic), float(result.pvalue)


def ks_uniform(u) -> tuple[float, float]:
    """Kolmogorov-Smirnov test of u against the uniform law on (0, 1)."""
    result = stats.kstest(_nonempty(u, "u"), "uniform", method="asymp")
    return float(result.statistic), float(result.pvalue)


def exp_rate_test(samples, rate: float, threshold: float = 3.0) -> tuple[float, bool]:
    """
    z-score of the sample mean against 1/rate under the exponential law with
    that rate, whose standard deviation is 1/rate.
    """
    values = _nonempty(samples, "samples")
    if not 0.0 < rate < math.inf:
        raise InvalidArgumentError(f"rate must be finite and positive, got {rate}.")
    z_score: float = (values.mean() - 1.0 / rate) * rate * math.sqrt(values.size)
    return float(z_score), bool(abs(z_score) < threshold)


def mean_with_error(values) -> tuple[float, float]:
    """Sample mean and its standard error."""
    array = _nonempty(values, "values")
    spread: float = float(array.std(ddof=1)) if array.size > 1 else 0.0
    return float(array.mean()), spread / math.sqrt(array.size)


def kendall_tau(a, b) -> float:
    tau, _ = stats.kendalltau(_nonempty(a, "a"), _nonempty(b, "b"))
    return float(tau)
