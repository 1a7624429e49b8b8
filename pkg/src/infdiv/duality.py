import math
from functools import cached_property
from typing import Optional

import numpy as np

from src.core import LevyMeasure
from src.errors import InverseUnavailableError, NonConvergenceError
from src.logger import ColoredLogger, LogLevel
from src.numerics import integrate_adaptive
from src.rng import RngStream
from src.type_definitions import SeriesSample

from .series_sampler import PoissonLevelSeries


class DualitySeriesSampler(PoissonLevelSeries):
    """
    X = Σ_k S⁻¹(τ_k) 1{τ_k ≤ ν((0, ∞])}, S the survival function of ν.

    Finite ν gives a finite series. For infinite ν the series stops at the
    first jump below `tol`, i.e. at level S(tol); the dropped jumps have mean
    ∫₀^tol (S(t) - S(tol)) dt, which is reported as the bound. An arrival
    below the atom ν({∞}) makes the draw infinite.
    """

    default_tol: float = 1e-6

    def __init__(
        self,
        levy: LevyMeasure,
        tol: Optional[float],
        logger: ColoredLogger,
        allow_numeric_inverse: bool = False,
    ) -> None:
        """
        Initializes a new instance of the DualitySeriesSampler class.

        Args:
            levy (LevyMeasure): The Lévy measure of the law.
            tol (Optional[float]): Smallest jump kept when ν is infinite.
            logger (ColoredLogger): The logger instance.
            allow_numeric_inverse (bool, optional): Accept a bisection inverse of S.

        Raises:
            InverseUnavailableError: If S⁻¹ has no closed form and numeric
                inversion is not allowed.
        """
        super().__init__(tol=tol, logger=logger)
        if (
            levy.closed_survival_inverse is None
            and levy.point_mass is None
            and not allow_numeric_inverse
        ):
            raise InverseUnavailableError(
                f"{levy.name}: no closed survival inverse; pass allow_numeric_inverse."
            )
        self.levy: LevyMeasure = levy

    @cached_property
    def level(self) -> tuple[float, bool, float]:
        if self.levy.finite:
            return self.levy.total_mass, True, 0.0
        level: float = float(self.levy.survival_function(self.tol))
        try:
            error_bound: float = integrate_adaptive(
                lambda t: max(float(self.levy.survival_function(t)) - level, 0.0),
                0.0,
                self.tol,
                rel_tol=self.levy.rel_tol,
            ).value
        except NonConvergenceError:
            error_bound = math.inf
        self.logger.log(
            LogLevel.TRUNCATE,
            f"{self.levy.name}: duality series truncated at level {level:.6g} "
            f"(expected remainder ≤ {error_bound:.3g}).",
        )
        return level, False, error_bound

    def terms(self, arrivals: np.ndarray, rng: RngStream) -> np.ndarray:
        return np.asarray(self.levy.survival_inverse(arrivals), dtype=float)


def sample_id_duality(
    nu: LevyMeasure,
    rng: RngStream,
    tol: Optional[float] = None,
    allow_numeric_inverse: bool = False,
) -> SeriesSample:
    """One draw of the law with Bernstein function Ψ_ν by the duality series."""
    sampler = DualitySeriesSampler(
        levy=nu,
        tol=tol,
        logger=ColoredLogger(name=__name__),
        allow_numeric_inverse=allow_numeric_inverse,
    )
    return sampler.sample(rng)


def sample_id_duality_batch(
    nu: LevyMeasure,
    n: int,
    rng: RngStream,
    tol: Optional[float] = None,
    allow_numeric_inverse: bool = False,
) -> np.ndarray:
    sampler = DualitySeriesSampler(
        levy=nu,
        tol=tol,
        logger=ColoredLogger(name=__name__),
        allow_numeric_inverse=allow_numeric_inverse,
    )
    return sampler.sample_batch(n, rng)
