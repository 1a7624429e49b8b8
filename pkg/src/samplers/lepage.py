import math
from functools import cached_property
from typing import TYPE_CHECKING, Optional

import numpy as np

from src.core._arrays import as_array, zero_times_inf
from src.errors import NonConvergenceError
from src.logger import ColoredLogger, LogLevel
from src.rng import RngStream

from .path import PathSample
from .path_sampler import PathSampler
from .tilted import ZSampler

if TYPE_CHECKING:
    from src.idt import IdtModel

_MAX_DOUBLINGS: int = 80
_BISECTIONS: int = 30


class LePagePathSampler(PathSampler):
    """
    H_t = Σ_k Z_k w(Γ_k Ψ_F(Z_k) / (t Ψ_H(1))), Γ_k the arrival times of a unit
    Poisson process and Z_k iid from the tilted law.

    Arrivals Γ_k are kept up to a level Γ*. If Ψ_F(z) ≥ δ > 0 on the support of
    ν_L and u_F < ∞, Γ* = u_F horizon Ψ_H(1) / δ and the series is exact.
    Otherwise Γ* is the smallest level (up to bisection) with expected remainder

        R(Γ) = horizon ∫ z Λ(Γ Ψ_F(z) / (horizon Ψ_H(1))) ν_L(dz) ≤ tol,

    Λ(a) = ∫_a^∞ -log F.
    """

    default_tol: float = 1e-4

    def __init__(
        self,
        model: "IdtModel",
        horizon: float,
        tol: Optional[float],
        logger: ColoredLogger,
    ) -> None:
        """
        Initializes a new instance of the LePagePathSampler class.

        Args:
            model (IdtModel): An admissible model.
            horizon (float): Paths are produced on [0, horizon].
            tol (Optional[float]): Expected truncation error when the series is infinite.
            logger (ColoredLogger): The logger instance.

        Raises:
            ZSamplerUnavailableError: If the tilted law cannot be sampled.
        """
        super().__init__(model=model, horizon=horizon, tol=tol, logger=logger)
        self.z_sampler: ZSampler = ZSampler(model)
        self.psi_h_one: float = model.psi_h_one

    def _remainder(self, level: float) -> float:
        F = self.model.F
        scale: float = self.horizon * self.psi_h_one

        def integrand(z: float) -> float:
            tail: float = F.tail_weight_integral(level * float(F.psi(z)) / scale)
            return float(zero_times_inf(z, tail))

        try:
            return self.horizon * self.model.L.levy.integrate(integrand)
        except NonConvergenceError:
            return math.inf

    @cached_property
    def level(self) -> tuple[float, bool, float]:
        """
        (Γ*, exact, bound).

        Raises:
            NonConvergenceError: If no level meets the tolerance.
        """
        F = self.model.F
        nu = self.model.L.levy
        if self.horizon == 0.0:
            return 0.0, True, 0.0
        delta: float = float(F.psi(nu.support_lower)) if nu.support_lower > 0.0 else 0.0
        if F.bounded and delta > 0.0:
            return F.right_support * self.horizon * self.psi_h_one / delta, True, 0.0

        hi: float = 1.0
        for _ in range(_MAX_DOUBLINGS):
            if self._remainder(hi) <= self.tol:
                break
            hi *= 2.0
        else:
            raise NonConvergenceError(
                f"{self.model.family_id}: LePage remainder stays above {self.tol:g} "
                f"up to Γ = {hi:g}."
            )
        lo: float = hi / 2.0 if hi > 1.0 else 0.0
        for _ in range(_BISECTIONS):
            mid: float = 0.5 * (lo + hi)
            if self._remainder(mid) <= self.tol:
                hi = mid
            else:
                lo = mid
        error_bound: float = self._remainder(hi)
        self.logger.log(
            LogLevel.TRUNCATE,
            f"{self.model.family_id}: LePage series truncated at Γ = {hi:.6g} "
            f"(expected remainder ≤ {error_bound:.3g}).",
        )
        return hi, False, error_bound

    def _points(self, marks: np.ndarray, arrivals: np.ndarray) -> np.ndarray:
        return arrivals * as_array(self.model.F.psi(marks)) / self.psi_h_one

    def sample(self, rng: RngStream) -> PathSample:
        level, exact, error_bound = self.level
        count: int = int(rng.poisson(level))
        arrivals = as_array(rng.uniform(count)) * level
        marks = self.z_sampler.sample(count, rng)
        self.logger.log(LogLevel.SAMPLE, f"LePage path with {count} terms.")
        return PathSample(
            jump_times=self._points(marks, arrivals),
            jump_values=marks,
            weight=self.model.F.weight,
            horizon=self.horizon,
            support_end=self.model.F.right_support,
            exact=exact,
            truncation_error_bound=error_bound,
        )

    def sample_values(self, n: int, rng: RngStream, t: Optional[float] = None) -> np.ndarray:
        time: float = self._resolve_time(t)
        level, _, _ = self.level
        counts = rng.poisson(level, size=n)
        total: int = int(counts.sum())
        if time == 0.0 or total == 0:
            return np.zeros(n)
        arrivals = as_array(rng.uniform(total)) * level
        marks = self.z_sampler.sample(total, rng)
        contributions = zero_times_inf(
            marks, self.model.F.weight(self._points(marks, arrivals) / time)
        )
        return np.bincount(
            np.repeat(np.arange(n), counts), weights=contributions, minlength=n
        )


def sample_H_lepage(
    model: "IdtModel",
    horizon: float,
    rng: RngStream,
    tol: Optional[float] = None,
    logger: Optional[ColoredLogger] = None,
) -> PathSample:
    """One path of H on [0, horizon] by the LePage series."""
    sampler = LePagePathSampler(
        model=model,
        horizon=horizon,
        tol=tol,
        logger=logger or ColoredLogger(name=__name__),
    )
    return sampler.sample(rng)
