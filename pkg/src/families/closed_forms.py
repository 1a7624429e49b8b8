"""Closed-form stable tail dependence functions and special-function kernels."""

import math
from typing import Callable

import numpy as np
from scipy.special import exp1

from src.core._arrays import as_array
from src.errors import InvalidArgumentError

# Beyond this, e^u E₁(u) switches to its asymptotic series.
_ASYMPTOTIC_FROM: float = 500.0


def exp_e1(u) -> np.ndarray:
    """e^u E₁(u) for u > 0, free of overflow for large u."""
    u = as_array(u)
    safe = np.where(u > 0.0, u, 1.0)
    large = np.maximum(safe, _ASYMPTOTIC_FROM)
    inverse = 1.0 / large
    series = inverse * (
        1.0
        + inverse * (-1.0 + inverse * (2.0 + inverse * (-6.0 + inverse * 24.0)))
    )
    small = np.minimum(safe, _ASYMPTOTIC_FROM)
    direct = np.exp(small) * exp1(small)
    values = np.where(safe > _ASYMPTOTIC_FROM, series, direct)
    return np.where(u > 0.0, values, math.inf)


def _positive_entries(t) -> np.ndarray:
    t = as_array(t).ravel()
    if np.any(t < 0.0) or np.any(~np.isfinite(t)):
        raise InvalidArgumentError("ℓ needs finite non-negative arguments.")
    return t[t > 0.0]


def closed_ell_exp_family(psi_H: Callable, t) -> float:
    """
    ℓ for F(x) = min{exp(x - 1), 1} and any L.

    With t sorted ascending, a_j = Σ_{k≥j} 1/t_k and
    G_j = Σ_{k>j} (1 - t_j/t_k) (G_0 = d, G_d = 0),

        ℓ(t) = Σ_j (A(G_{j-1}) - A(G_j)) / a_j,   A(x) = x Ψ_H(x).

    Args:
        psi_H (Callable): Ψ_H of the model.
        t: Non-negative entries; zeros are dropped.

    Returns:
        float: ℓ(t), 0 for an all-zero vector.
    """
    t = np.sort(_positive_entries(t))
    d: int = t.size
    if d == 0:
        return 0.0
    a = np.cumsum((1.0 / t)[::-1])[::-1]
    a_next = np.append(a[1:], 0.0)
    G = np.empty(d + 1)
    G[0] = float(d)
    G[1:] = (d - np.arange(1, d + 1)) - t * a_next
    G[d] = 0.0
    G = np.maximum(G, 0.0)
    A = np.where(G > 0.0, G * as_array(psi_H(np.where(G > 0.0, G, 1.0))), 0.0)
    return float(np.sum((A[:-1] - A[1:]) / a))


def closed_ell_frechet(theta: float, psi_H1: float, t) -> float:
    """
    ℓ(t) = Ψ_H(1) (Σ_k t_k^{1/θ})^θ, valid for the Fréchet F and any L.
    """
    if not 0.0 < theta < 1.0:
        raise InvalidArgumentError(f"theta must lie in (0, 1), got {theta}.")
    t = _positive_entries(t)
    if t.size == 0:
        return 0.0
    # Scaled by the largest entry to keep t^{1/θ} finite.
    top: float = float(t.max())
    return float(psi_H1 * top * np.sum((t / top) ** (1.0 / theta)) ** theta)
