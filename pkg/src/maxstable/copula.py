"""
Exact simulation of the extreme-value copula C_d(u) = exp(-ℓ_d(-log u)).

Z_j = max_k d Q_j^{(k)} / (ε₁ + … + ε_k) is unit Fréchet in every margin; the
running maximum is final once d / (ε₁ + … + ε_{n+1}) drops below min_j Z_j,
since every later term is smaller. U_j = exp(-1 / Z_j).
"""

import math
from typing import TYPE_CHECKING

import numpy as np

from src.errors import InvalidArgumentError
from src.logger import ColoredLogger, LogLevel
from src.rng import RngStream
from src.samplers.tilted import ZSampler

from .pickands import sample_Q_batch

if TYPE_CHECKING:
    from src.idt import IdtModel

logger = ColoredLogger(name=__name__)


def _require_dimension(d: int) -> None:
    if d < 2:
        raise InvalidArgumentError(f"d must be at least 2, got {d}.")


def _frechet_maxima(
    model: "IdtModel", d: int, n: int, rng: RngStream
) -> tuple[np.ndarray, np.ndarray]:
    """
    Runs n stopping chains side by side.

    Returns:
        tuple[np.ndarray, np.ndarray]: The (n, d) maxima Z^{(M)} and the
        stopping indices M.
    """
    z_sampler = ZSampler(model)
    maxima = np.zeros((n, d))
    arrivals = np.zeros(n)
    steps = np.zeros(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    while active.any():
        rows = np.flatnonzero(active)
        arrivals[rows] += rng.exponential(rows.size)
        done = d / arrivals[rows] < maxima[rows].min(axis=1)
        active[rows[done]] = False
        rows = rows[~done]
        if rows.size == 0:
            break
        q = sample_Q_batch(model, d, rows.size, rng, z_sampler=z_sampler)
        maxima[rows] = np.maximum(maxima[rows], d * q / arrivals[rows, None])
        steps[rows] += 1
    logger.log(
        LogLevel.SAMPLE,
        f"{n} copula draws in dimension {d}, mean stopping index {steps.mean():.3f}.",
    )
    return maxima, steps


def sample_copula_batch(model: "IdtModel", d: int, n: int, rng: RngStream) -> np.ndarray:
    """n independent draws from C_d, one per row."""
    _require_dimension(d)
    maxima, _ = _frechet_maxima(model, d, n, rng)
    return np.exp(-1.0 / maxima)


def sample_copula(model: "IdtModel", d: int, rng: RngStream) -> np.ndarray:
    """
    One exact draw U ~ C_d.

    Args:
        model (IdtModel): A normalized model.
        d (int): Dimension, at least 2.
        rng (RngStream): The random stream.

    Returns:
        np.ndarray: d values strictly inside (0, 1).

    Raises:
        MSamplerUnavailableError: If F has no exact size-biased sampler.
        ZSamplerUnavailableError: If the tilted law cannot be sampled.
    """
    return sample_copula_batch(model, d, 1, rng)[0]


def sample_copula_batch_with_stopping(
    model: "IdtModel", d: int, n: int, rng: RngStream
) -> tuple[np.ndarray, np.ndarray]:
    """n draws from C_d and the number of Pickands draws each one used."""
    _require_dimension(d)
    maxima, steps = _frechet_maxima(model, d, n, rng)
    return np.exp(-1.0 / maxima), steps


def sample_copula_with_stopping(
    model: "IdtModel", d: int, rng: RngStream
) -> tuple[np.ndarray, int]:
    """One draw from C_d together with the number of Pickands draws it used."""
    values, steps = sample_copula_batch_with_stopping(model, d, 1, rng)
    return values[0], int(steps[0])


def sample_minstable_batch(model: "IdtModel", d: int, n: int, rng: RngStream) -> np.ndarray:
    """
    n draws of the exchangeable min-stable vector Y with P(Y > t) = exp(-ℓ_d(t)).

    Y_j = 1 / Z_j = -log U_j, so margins are unit exponential.
    """
    _require_dimension(d)
    maxima, _ = _frechet_maxima(model, d, n, rng)
    return 1.0 / maxima


def sample_minstable(model: "IdtModel", d: int, rng: RngStream) -> np.ndarray:
    return sample_minstable_batch(model, d, 1, rng)[0]


def expected_stopping(model: "IdtModel", d: int) -> float:
    """
    E[M] = -d Σ_{k=1}^d binom(d, k) (-1)^k / Ψ_H(k), summed with math.fsum.

    Raises:
        InvalidArgumentError: If d < 1 or the model is not normalized.
    """
    if d < 1:
        raise InvalidArgumentError(f"d must be at least 1, got {d}.")
    if not model.normalized:
        raise InvalidArgumentError(f"{model.family_id}: expected_stopping needs Ψ_H(1) = 1.")
    psi_values = np.atleast_1d(model.psi_H(np.arange(1, d + 1, dtype=float)))
    terms = [
        (-1) ** (k + 1) * math.comb(d, k) / float(psi_values[k - 1]) for k in range(1, d + 1)
    ]
    return d * math.fsum(terms)
