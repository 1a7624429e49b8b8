import math
from typing import Any, Callable

import numpy as np

from src.errors import InvalidArgumentError
from src.logger import ColoredLogger
from src.rng import RngStream
from src.type_definitions import SeriesSample

from .series_sampler import PoissonLevelSeries


class CompoundPoissonSeriesSampler(PoissonLevelSeries):
    """
    X = Σ_k J_k / G⁻¹(τ_k / β) 1{τ_k ≤ β}: the compound Poisson law with
    intensity β whose jump density is -φ_G', φ_G the Laplace transform of G.
    Always exact.
    """

    def __init__(
        self,
        beta: float,
        G_inverse: Callable[[Any], Any],
        logger: ColoredLogger,
    ) -> None:
        """
        Initializes a new instance of the CompoundPoissonSeriesSampler class.

        Args:
            beta (float): Intensity, finite and positive.
            G_inverse (Callable[[Any], Any]): Generalized inverse of a cdf G with G(0) = 0.
            logger (ColoredLogger): The logger instance.

        Raises:
            InvalidArgumentError: If β is not finite and positive.
        """
        super().__init__(tol=None, logger=logger)
        if not 0.0 < beta < math.inf:
            raise InvalidArgumentError(f"beta must be finite and positive, got {beta}.")
        self.beta: float = float(beta)
        self.G_inverse: Callable[[Any], Any] = G_inverse

    @property
    def level(self) -> tuple[float, bool, float]:
        return self.beta, True, 0.0

    def terms(self, arrivals: np.ndarray, rng: RngStream) -> np.ndarray:
        jumps = np.asarray(rng.exponential(arrivals.size), dtype=float)
        return jumps / np.asarray(self.G_inverse(arrivals / self.beta), dtype=float)


def sample_cp_from_G(
    beta: float, G_inverse: Callable[[Any], Any], rng: RngStream
) -> SeriesSample:
    sampler = CompoundPoissonSeriesSampler(
        beta=beta, G_inverse=G_inverse, logger=ColoredLogger(name=__name__)
    )
    return sampler.sample(rng)


def sample_cp_from_G_batch(
    beta: float, G_inverse: Callable[[Any], Any], n: int, rng: RngStream
) -> np.ndarray:
    sampler = CompoundPoissonSeriesSampler(
        beta=beta, G_inverse=G_inverse, logger=ColoredLogger(name=__name__)
    )
    return sampler.sample_batch(n, rng)


def cp_from_stieltjes(
    mass: float, g_rho_inverse: Callable[[Any], Any]
) -> tuple[float, Callable[[Any], Any]]:
    """
    (β, G⁻¹) of a finite Stieltjes measure: β = ρ((0, ∞)) and
    G⁻¹(p) = 1 / g_ρ⁻¹(β p), so that both series coincide term by term.

    Raises:
        InvalidArgumentError: If the mass is not finite.
    """
    if not math.isfinite(mass):
        raise InvalidArgumentError("A compound Poisson law needs a finite Stieltjes mass.")

    def G_inverse(p: Any) -> np.ndarray:
        return 1.0 / np.asarray(g_rho_inverse(mass * np.asarray(p, dtype=float)), dtype=float)

    return mass, G_inverse
