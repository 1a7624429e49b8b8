import math
from functools import cached_property
from typing import Optional

import numpy as np

from src.core import StieltjesMeasure
from src.errors import InverseUnavailableError, NonConvergenceError
from src.logger import ColoredLogger, LogLevel
from src.numerics import integrate_adaptive
from src.rng import RngStream
from src.type_definitions import SeriesSample

from .series_sampler import PoissonLevelSeries

_MAX_DOUBLINGS: int = 80
_BISECTIONS: int = 40


class BondessonSeriesSampler(PoissonLevelSeries):
    """
    X = Σ_k J_k g_ρ⁻¹(τ_k) 1{τ_k ≤ ρ((0, ∞))}, J_k iid unit exponential.

    Finite ρ gives a finite series. For infinite ρ the terms beyond a level Γ
    are replaced by their mean ∫_Γ^∞ g_ρ⁻¹; Γ is the smallest level (up to
    bisection) at which the root-mean-square error of that replacement,
    (2 ∫_Γ^∞ (g_ρ⁻¹)²)^{1/2}, is at most `tol`.
    """

    default_tol: float = 1e-3

    def __init__(
        self,
        stieltjes: StieltjesMeasure,
        tol: Optional[float],
        logger: ColoredLogger,
        allow_numeric_inverse: bool = False,
    ) -> None:
        """
        Initializes a new instance of the BondessonSeriesSampler class.

        Args:
            stieltjes (StieltjesMeasure): The Stieltjes measure ρ.
            tol (Optional[float]): Root-mean-square truncation error when ρ is infinite.
            logger (ColoredLogger): The logger instance.
            allow_numeric_inverse (bool, optional): Accept a bisection inverse of g_ρ.

        Raises:
            InverseUnavailableError: If g_ρ⁻¹ has no closed form and numeric
                inversion is not allowed.
        """
        super().__init__(tol=tol, logger=logger)
        if stieltjes.closed_g_rho_inverse is None and not allow_numeric_inverse:
            raise InverseUnavailableError(
                f"{stieltjes.name}: no closed g_ρ⁻¹; pass allow_numeric_inverse."
            )
        self.stieltjes: StieltjesMeasure = stieltjes

    def _tail_integral(self, level: float, power: int) -> float:
        try:
            return integrate_adaptive(
                lambda y: float(self.stieltjes.g_rho_inverse(y)) ** power,
                level,
                math.inf,
                rel_tol=self.stieltjes.rel_tol,
            ).value
        except NonConvergenceError:
            return math.inf

    def _rms(self, level: float) -> float:
        return math.sqrt(2.0 * self._tail_integral(level, 2))

    @cached_property
    def level(self) -> tuple[float, bool, float]:
        """
        Raises:
            NonConvergenceError: If no level meets the tolerance.
        """
        if self.stieltjes.finite:
            return self.stieltjes.total_mass, True, 0.0
        hi: float = 1.0
        for _ in range(_MAX_DOUBLINGS):
            if self._rms(hi) <= self.tol:
                break
            hi *= 2.0
        else:
            raise NonConvergenceError(
                f"{self.stieltjes.name}: Bondesson remainder stays above {self.tol:g} "
                f"up to level {hi:g}."
            )
        lo: float = hi / 2.0 if hi > 1.0 else 0.0
        for _ in range(_BISECTIONS):
            mid: float = 0.5 * (lo + hi)
            if self._rms(mid) <= self.tol:
                hi = mid
            else:
                lo = mid
        error_bound: float = self._rms(hi)
        self.logger.log(
            LogLevel.TRUNCATE,
            f"{self.stieltjes.name}: Bondesson series truncated at level {hi:.6g} "
            f"(rms remainder ≤ {error_bound:.3g}, mean {self._tail_integral(hi, 1):.3g} "
            "added back).",
        )
        return hi, False, error_bound

    @cached_property
    def compensation(self) -> float:
        level, exact, _ = self.level
        return 0.0 if exact else self._tail_integral(level, 1)

    def terms(self, arrivals: np.ndarray, rng: RngStream) -> np.ndarray:
        jumps = np.asarray(rng.exponential(arrivals.size), dtype=float)
        return jumps * np.asarray(self.stieltjes.g_rho_inverse(arrivals), dtype=float)


def sample_bondesson(
    rho: StieltjesMeasure,
    rng: RngStream,
    tol: Optional[float] = None,
    allow_numeric_inverse: bool = False,
) -> SeriesSample:
    """One draw of the Bondesson-class law with Stieltjes measure ρ."""
    sampler = BondessonSeriesSampler(
        stieltjes=rho,
        tol=tol,
        logger=ColoredLogger(name=__name__),
        allow_numeric_inverse=allow_numeric_inverse,
    )
    return sampler.sample(rng)


def sample_bondesson_batch(
    rho: StieltjesMeasure,
    n: int,
    rng: RngStream,
    tol: Optional[float] = None,
    allow_numeric_inverse: bool = False,
) -> np.ndarray:
    sampler = BondessonSeriesSampler(
        stieltjes=rho,
        tol=tol,
        logger=ColoredLogger(name=__name__),
        allow_numeric_inverse=allow_numeric_inverse,
    )
    return sampler.sample_batch(n, rng)
