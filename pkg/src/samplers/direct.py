import math
from functools import cached_property
from typing import TYPE_CHECKING, Optional

import numpy as np

from src.core import BernsteinFunction
from src.core._arrays import as_array, zero_times_inf
from src.errors import (
    InvalidArgumentError,
    NonConvergenceError,
    NotCompoundPoissonError,
    UnboundedSupportError,
)
from src.logger import ColoredLogger, LogLevel
from src.rng import RngStream

from .path import PathSample, levy_weight
from .path_sampler import PathSampler

if TYPE_CHECKING:
    from src.idt import IdtModel

_MAX_DOUBLINGS: int = 200
_BISECTIONS: int = 40


def _require_compound_poisson(L: BernsteinFunction) -> None:
    if not L.levy.finite:
        raise NotCompoundPoissonError(f"{L.name}: ν_L has infinite total mass.")


def sample_levy_path_cp(L: BernsteinFunction, horizon: float, rng: RngStream) -> PathSample:
    """
    Exact compound Poisson path of L on [0, horizon]: a Poisson(β horizon)
    number of jumps at uniform times with sizes from ν_L / β.

    Raises:
        NotCompoundPoissonError: If ν_L has infinite mass.
    """
    _require_compound_poisson(L)
    if not 0.0 <= horizon < math.inf:
        raise InvalidArgumentError(f"horizon must be finite and ≥ 0, got {horizon}.")
    count: int = int(rng.poisson(L.levy.total_mass * horizon))
    times = as_array(rng.uniform(count)) * horizon
    sizes = L.levy.sample_jumps(count, rng)
    return PathSample(
        jump_times=times,
        jump_values=sizes,
        weight=levy_weight,
        horizon=horizon,
        support_end=1.0,
    )


def sample_levy_values_cp(
    L: BernsteinFunction, t: float, n: int, rng: RngStream
) -> np.ndarray:
    """n independent copies of L_t."""
    _require_compound_poisson(L)
    counts = rng.poisson(L.levy.total_mass * t, size=n)
    sizes = L.levy.sample_jumps(int(counts.sum()), rng)
    return np.bincount(np.repeat(np.arange(n), counts), weights=sizes, minlength=n)


class DirectPathSampler(PathSampler):
    """
    H_t = Σ_{τ_k ≤ u_F t} -log F(τ_k / t -) J_k from a compound Poisson path of L.

    Exact when u_F < ∞ (L is simulated on [0, u_F horizon]). Otherwise L is
    simulated on [0, T*] with E[Σ_{τ > T*} J w(τ / horizon)] =
    E[J-intensity] horizon Λ(T* / horizon) ≤ tol, Λ(a) = ∫_a^∞ -log F.
    """

    default_tol: float = 1e-6

    def __init__(
        self,
        model: "IdtModel",
        horizon: float,
        tol: Optional[float],
        logger: ColoredLogger,
    ) -> None:
        """
        Initializes a new instance of the DirectPathSampler class.

        Args:
            model (IdtModel): The model; L must be compound Poisson.
            horizon (float): Paths are produced on [0, horizon].
            tol (Optional[float]): Expected truncation error for u_F = ∞.
            logger (ColoredLogger): The logger instance.

        Raises:
            NotCompoundPoissonError: If ν_L has infinite mass.
        """
        super().__init__(model=model, horizon=horizon, tol=tol, logger=logger)
        _require_compound_poisson(model.L)

    @cached_property
    def window(self) -> tuple[float, bool, float]:
        """
        (T, exact, bound): L is simulated on [0, T].

        Raises:
            NonConvergenceError: If no T meets the tolerance.
        """
        F = self.model.F
        if F.bounded or self.horizon == 0.0:
            return F.right_support * self.horizon if F.bounded else 0.0, True, 0.0
        jump_mean: float = self.model.L.levy.jump_mean
        if not math.isfinite(jump_mean):
            raise NonConvergenceError(
                f"{self.model.L.name}: infinite jump mean, the tail of the direct "
                "construction cannot be bounded."
            )

        def bound(a: float) -> float:
            try:
                return jump_mean * self.horizon * F.tail_weight_integral(a)
            except NonConvergenceError:
                return math.inf

        hi: float = max(1.0, F.left_support)
        for _ in range(_MAX_DOUBLINGS):
            if bound(hi) <= self.tol:
                break
            hi *= 2.0
        else:
            raise NonConvergenceError(
                f"{F.name}: tail bound stays above {self.tol:g} up to T = {hi:g}."
            )
        lo: float = hi / 2.0 if hi > 1.0 else 0.0
        for _ in range(_BISECTIONS):
            mid: float = 0.5 * (lo + hi)
            if bound(mid) <= self.tol:
                hi = mid
            else:
                lo = mid
        error_bound: float = bound(hi)
        self.logger.log(
            LogLevel.TRUNCATE,
            f"{self.model.family_id}: L truncated at T = {hi * self.horizon:.6g} "
            f"(expected remainder ≤ {error_bound:.3g}).",
        )
        return hi * self.horizon, False, error_bound

    def sample(self, rng: RngStream) -> PathSample:
        end, exact, error_bound = self.window
        levy_path = sample_levy_path_cp(self.model.L, end, rng)
        self.logger.log(
            LogLevel.SAMPLE, f"Direct path with {len(levy_path)} jumps of L on [0, {end:g}]."
        )
        return PathSample(
            jump_times=levy_path.jump_times,
            jump_values=levy_path.jump_values,
            weight=self.model.F.weight,
            horizon=self.horizon,
            support_end=self.model.F.right_support,
            exact=exact,
            truncation_error_bound=error_bound,
        )

    def sample_values(self, n: int, rng: RngStream, t: Optional[float] = None) -> np.ndarray:
        time: float = self._resolve_time(t)
        end, _, _ = self.window
        counts = rng.poisson(self.model.L.levy.total_mass * end, size=n)
        total: int = int(counts.sum())
        if time == 0.0 or total == 0:
            return np.zeros(n)
        positions = as_array(rng.uniform(total)) * end
        sizes = self.model.L.levy.sample_jumps(total, rng)
        contributions = zero_times_inf(sizes, self.model.F.weight(positions / time))
        return np.bincount(
            np.repeat(np.arange(n), counts), weights=contributions, minlength=n
        )

    def sample_increments(
        self, n: int, rng: RngStream, t: float, x: float
    ) -> tuple[np.ndarray, np.ndarray]:
        """
        n independent copies of (X₁, X₂), the split of H_{t+x} - H_t into the
        part driven by jumps of L in (u_F t, u_F (t+x)] and the rest.

        Raises:
            UnboundedSupportError: If u_F = ∞.
        """
        F = self.model.F
        if not F.bounded:
            raise UnboundedSupportError(f"{F.name}: the increment split needs u_F < ∞.")
        if not (t > 0.0 and x > 0.0):
            raise InvalidArgumentError("Need t > 0 and x > 0.")
        end: float = F.right_support * (t + x)
        counts = rng.poisson(self.model.L.levy.total_mass * end, size=n)
        total: int = int(counts.sum())
        replicate = np.repeat(np.arange(n), counts)
        positions = as_array(rng.uniform(total)) * end
        sizes = self.model.L.levy.sample_jumps(total, rng)
        later = as_array(F.weight(positions / (t + x)))
        earlier = as_array(F.weight(positions / t))
        old = positions <= F.right_support * t
        gaps = np.where(later == earlier, 0.0, later - earlier)
        x1 = np.bincount(
            replicate,
            weights=np.where(old, 0.0, zero_times_inf(sizes, later)),
            minlength=n,
        )
        x2 = np.bincount(
            replicate, weights=np.where(old, zero_times_inf(sizes, gaps), 0.0), minlength=n
        )
        return x1, x2


def sample_H_direct(
    model: "IdtModel",
    horizon: float,
    rng: RngStream,
    tol: Optional[float] = None,
    logger: Optional[ColoredLogger] = None,
) -> PathSample:
    """One path of H on [0, horizon] by the direct construction."""
    sampler = DirectPathSampler(
        model=model,
        horizon=horizon,
        tol=tol,
        logger=logger or ColoredLogger(name=__name__),
    )
    return sampler.sample(rng)
