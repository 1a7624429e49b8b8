import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from src.errors import (
    InvalidArgumentError,
    MSamplerUnavailableError,
    NonConvergenceError,
)
from src.numerics import (
    DEFAULT_REL_TOL,
    MonotoneFn,
    integrate_adaptive,
    inverse_on_array,
)
from src.rng import RngStream
from src.type_definitions import Direction

from ._arrays import ArrayFn, as_array, map_scalar, neg_log

PowerSampler = Callable[[np.ndarray, RngStream], np.ndarray]


def one_minus_power(p, x: float) -> np.ndarray:
    """1 - p**x computed as -expm1(x log p), with 1 - 0**x = 1 for x > 0."""
    p = as_array(p)
    with np.errstate(divide="ignore"):
        log_p = np.log(p)
    return np.where(p > 0.0, -np.expm1(x * log_p), 1.0)


@dataclass(frozen=True)
class DistributionF:
    """
    A distribution function F on [0, ∞) with finite positive mean.

    Closed forms are optional overrides: without them the inverse is found by
    bisection, Ψ_F(x) = ∫ (1 - F(s)^x) ds by quadrature, F^z is sampled by
    inversion and the size-biased law x dF^z(x) / Ψ_F(z) by rejection from
    F^z (bounded support only).

    Attributes:
        cdf (ArrayFn): Right-continuous F, vectorized.
        left_support (float): inf{x : F(x) > 0}.
        right_support (float): u_F = inf{x : F(x) = 1}, possibly ∞.
        name (str): Label used in logs and reports.
        left_limit (Optional[ArrayFn]): F(x-); defaults to F at the previous float.
        closed_inverse (Optional[ArrayFn]): Generalized inverse F⁻¹ on (0, 1].
        closed_psi (Optional[ArrayFn]): Ψ_F in closed form.
        power_sampler (Optional[PowerSampler]): Sampler of F^z, one draw per entry of z.
        size_biased_sampler (Optional[PowerSampler]): Sampler of x dF^z(x) / Ψ_F(z).
        breakpoints (tuple[float, ...]): Jumps and kinks of F, passed to quadrature.
        rel_tol (float): Quadrature tolerance.
    """

    cdf: ArrayFn
    left_support: float
    right_support: float
    name: str = "F"
    left_limit: Optional[ArrayFn] = None
    closed_inverse: Optional[ArrayFn] = None
    closed_psi: Optional[ArrayFn] = None
    power_sampler: Optional[PowerSampler] = None
    size_biased_sampler: Optional[PowerSampler] = None
    breakpoints: tuple[float, ...] = field(default=())
    rel_tol: float = DEFAULT_REL_TOL

    def __post_init__(self) -> None:
        if self.left_support < 0.0 or not math.isfinite(self.left_support):
            raise InvalidArgumentError(
                f"{self.name}: left support must be finite and non-negative."
            )
        if self.right_support < self.left_support or self.right_support <= 0.0:
            raise InvalidArgumentError(
                f"{self.name}: right support {self.right_support} is not positive "
                f"or lies below the left support {self.left_support}."
            )

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.right_support)

    def __call__(self, x) -> np.ndarray:
        return self.cdf(as_array(x))

    def left_limit_cdf(self, x) -> np.ndarray:
        """F(x-)."""
        x = as_array(x)
        if self.left_limit is not None:
            return self.left_limit(x)
        return self.cdf(np.nextafter(x, -np.inf))

    def weight(self, x) -> np.ndarray:
        """-log F(x-), the integrand of the path construction."""
        return neg_log(self.left_limit_cdf(x))

    def neg_log_cdf(self, x) -> np.ndarray:
        return neg_log(self.cdf(as_array(x)))

    def quadrature_points(self) -> list[float]:
        points = set(self.breakpoints)
        points.add(self.left_support)
        if self.bounded:
            points.add(self.right_support)
        return sorted(p for p in points if p > 0.0 and math.isfinite(p))

    def inverse(self, p) -> np.ndarray:
        """Generalized inverse F⁻¹(p) = inf{x ≥ 0 : F(x) ≥ p}."""
        p = as_array(p)
        if self.closed_inverse is not None:
            return as_array(self.closed_inverse(p))
        monotone = MonotoneFn(
            direction=Direction.INCREASING,
            evaluator=lambda x: float(self.cdf(as_array(x))),
            lo=0.0,
            hi=self.right_support,
        )
        return inverse_on_array(monotone, p)

    def psi(self, x) -> np.ndarray:
        """Ψ_F(x), closed form when registered."""
        x = as_array(x)
        if self.closed_psi is None:
            return self.psi_quadrature(x)
        safe = np.where(np.isinf(x), 1.0, x)
        values = as_array(self.closed_psi(safe))
        values = np.where(x == 0.0, 0.0, values)
        return np.where(np.isinf(x), self.right_support, values)

    def psi_quadrature(self, x) -> np.ndarray:
        """Ψ_F(x) = ∫₀^∞ (1 - F(s)^x) ds by adaptive quadrature."""
        points: list[float] = self.quadrature_points()

        def evaluate(value: float) -> float:
            if value == 0.0:
                return 0.0
            if math.isinf(value):
                return self.right_support
            return integrate_adaptive(
                lambda s: float(one_minus_power(self.cdf(as_array(s)), value)),
                0.0,
                self.right_support,
                rel_tol=self.rel_tol,
                points=points,
            ).value

        return map_scalar(evaluate, x)

    @cached_property
    def mean(self) -> float:
        """∫ (1 - F) = Ψ_F(1)."""
        return float(self.psi(1.0))

    def validate(self) -> "DistributionF":
        """
        Check membership in the class of distribution functions with finite positive mean.

        Returns:
            DistributionF: self, for chaining.

        Raises:
            InvalidArgumentError: If the mean is not in (0, ∞) or F is not a cdf.
        """
        mean: float = self.mean
        if not 0.0 < mean < math.inf:
            raise InvalidArgumentError(f"{self.name}: mean {mean} is not in (0, ∞).")
        if self.bounded and float(self.cdf(as_array(self.right_support))) < 1.0:
            raise InvalidArgumentError(f"{self.name}: F(u_F) < 1.")
        grid = np.linspace(0.0, min(self.right_support, 10.0 * mean + 1.0), 257)
        MonotoneFn(
            Direction.INCREASING, lambda x: float(self.cdf(as_array(x)))
        ).check_monotone(grid)
        return self

    @cached_property
    def derivative_at_zero(self) -> float:
        """Ψ_F'(0) = ∫ -log F(s) ds, ∞ when F has a positive left end point."""
        if self.left_support > 0.0:
            return math.inf
        try:
            return self.tail_weight_integral(0.0)
        except NonConvergenceError:
            return math.inf

    def tail_weight_integral(self, a: float) -> float:
        """
        Λ(a) = ∫_a^∞ -log F(s) ds.

        Raises:
            NonConvergenceError: If the quadrature fails (typically Λ(a) = ∞).
        """
        if a >= self.right_support:
            return 0.0
        if a < self.left_support:
            return math.inf
        return integrate_adaptive(
            lambda s: float(self.neg_log_cdf(s)),
            float(a),
            self.right_support,
            rel_tol=self.rel_tol,
            points=[p for p in self.quadrature_points() if p > a],
        ).value

    def sample_power(self, z, rng: RngStream) -> np.ndarray:
        """One draw from F^z per entry of z (z > 0)."""
        z = as_array(z)
        if self.power_sampler is not None:
            return as_array(self.power_sampler(z, rng))
        uniforms = as_array(rng.uniform(z.shape if z.shape else None))
        return self.inverse(np.exp(np.log(uniforms) / z))

    def sample_size_biased(self, z, rng: RngStream) -> np.ndarray:
        """
        One draw from x dF^z(x) / Ψ_F(z) per entry of z.

        Raises:
            MSamplerUnavailableError: If no sampler is registered and u_F = ∞.
        """
        z = as_array(z)
        if self.size_biased_sampler is not None:
            return as_array(self.size_biased_sampler(z, rng))
        if not self.bounded:
            raise MSamplerUnavailableError(
                f"{self.name}: no exact sampler for x dF^z(x) / Ψ_F(z) with u_F = ∞."
            )
        flat_z = z.ravel()
        out = np.empty_like(flat_z)
        pending = np.arange(flat_z.size)
        while pending.size:
            proposals = self.sample_power(flat_z[pending], rng)
            accept = rng.uniform(pending.size) * self.right_support <= proposals
            out[pending[accept]] = proposals[accept]
            pending = pending[~accept]
        return out.reshape(z.shape)

    def rescaled(self, c: float) -> "DistributionF":
        """
        The distribution x ↦ F(c x).

        Ψ, the inverse, the supports, the samplers and the breakpoints are all
        divided by c.
        """
        if not 0.0 < c < math.inf:
            raise InvalidArgumentError(f"Scale must be positive and finite, got {c}.")
        if c == 1.0:
            return self
        base = self

        def scaled_sampler(sampler: Optional[PowerSampler]) -> Optional[PowerSampler]:
            if sampler is None:
                return None
            return lambda z, rng: as_array(sampler(z, rng)) / c

        return replace(
            self,
            cdf=lambda x: base.cdf(c * as_array(x)),
            left_limit=lambda x: base.left_limit_cdf(c * as_array(x)),
            left_support=self.left_support / c,
            right_support=self.right_support / c,
            name=f"{self.name}(c·)",
            closed_inverse=(
                None
                if self.closed_inverse is None
                else lambda p: as_array(base.closed_inverse(p)) / c
            ),
            closed_psi=(
                None
                if self.closed_psi is None
                else lambda x: as_array(base.closed_psi(x)) / c
            ),
            power_sampler=scaled_sampler(self.power_sampler),
            size_biased_sampler=scaled_sampler(self.size_biased_sampler),
            breakpoints=tuple(b / c for b in self.breakpoints),
        )
