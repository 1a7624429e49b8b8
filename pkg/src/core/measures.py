import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from src.errors import InvalidArgumentError, NonConvergenceError, NotCompoundPoissonError
from src.numerics import DEFAULT_REL_TOL, MonotoneFn, integrate_adaptive, inverse_on_array
from src.rng import RngStream
from src.type_definitions import Direction

from ._arrays import ArrayFn, as_array, map_scalar

JumpSampler = Callable[[int, RngStream], np.ndarray]


@dataclass(frozen=True)
class LevyMeasure:
    """
    A Lévy measure ν on (0, ∞], represented by its survival function.

    Attributes:
        survival (ArrayFn): t ↦ ν((t, ∞]) for t ∈ (0, ∞]; survival(∞) is the atom at ∞.
        total_mass (float): ν((0, ∞]), possibly ∞.
        atom_at_infinity (float): ν({∞}), the killing rate.
        name (str): Label used in logs and reports.
        closed_survival_inverse (Optional[ArrayFn]): y ↦ inf{t : S(t) ≤ y}.
        jump_mean_value (Optional[float]): ∫ u ν(du) when known in closed form.
        jump_sampler (Optional[JumpSampler]): Sampler of ν / ν((0, ∞]).
        size_biased_sampler (Optional[JumpSampler]): Sampler of u ν(du) / ∫ u ν(du).
        point_mass (Optional[float]): Location of the single atom when ν = β δ_a.
        support_lower (float): Lower end of the support of ν.
        breakpoints (tuple[float, ...]): Jumps of the survival function.
        jump_levels (tuple[float, ...]): Jumps of the survival inverse.
        rel_tol (float): Quadrature tolerance.
    """

    survival: ArrayFn
    total_mass: float
    atom_at_infinity: float = 0.0
    name: str = "ν"
    closed_survival_inverse: Optional[ArrayFn] = None
    jump_mean_value: Optional[float] = None
    jump_sampler: Optional[JumpSampler] = None
    size_biased_sampler: Optional[JumpSampler] = None
    point_mass: Optional[float] = None
    support_lower: float = 0.0
    breakpoints: tuple[float, ...] = field(default=())
    jump_levels: tuple[float, ...] = field(default=())
    rel_tol: float = DEFAULT_REL_TOL

    def __post_init__(self) -> None:
        if not self.total_mass > 0.0:
            raise InvalidArgumentError(f"{self.name}: total mass must be positive.")
        if not 0.0 <= self.atom_at_infinity <= self.total_mass:
            raise InvalidArgumentError(
                f"{self.name}: atom at infinity must lie in [0, total mass]."
            )

    @property
    def finite(self) -> bool:
        return math.isfinite(self.total_mass)

    def __call__(self, t) -> np.ndarray:
        return self.survival_function(t)

    def survival_function(self, t) -> np.ndarray:
        """S(t) = ν((t, ∞]), with S(0) = total mass and S(∞) = atom."""
        t = as_array(t)
        safe = np.where((t <= 0.0) | np.isinf(t), 1.0, t)
        values = as_array(self.survival(safe))
        values = np.where(t <= 0.0, self.total_mass, values)
        return np.where(np.isinf(t), self.atom_at_infinity, values)

    def survival_inverse(self, y) -> np.ndarray:
        """
        S⁻¹(y) = inf{t ≥ 0 : S(t) ≤ y}: ∞ below the atom, 0 from the total mass on.
        """
        y = as_array(y)
        if self.closed_survival_inverse is not None:
            inner = as_array(self.closed_survival_inverse(y))
        else:
            monotone = MonotoneFn(
                direction=Direction.DECREASING,
                evaluator=lambda t: float(self.survival_function(t)),
            )
            clipped = np.clip(y, self.atom_at_infinity, self.total_mass)
            clipped = np.where(np.isinf(clipped), 0.0, clipped)
            inner = inverse_on_array(monotone, clipped)
        inner = np.where(y >= self.total_mass, 0.0, inner)
        return np.where(y < self.atom_at_infinity, math.inf, inner)

    @cached_property
    def jump_mean(self) -> float:
        """∫ u ν(du) = ∫₀^∞ S(t) dt; ∞ with killing or when the quadrature diverges."""
        if self.atom_at_infinity > 0.0:
            return math.inf
        if self.jump_mean_value is not None:
            return self.jump_mean_value
        try:
            return integrate_adaptive(
                lambda t: float(self.survival_function(t)),
                0.0,
                math.inf,
                rel_tol=self.rel_tol,
                points=self.breakpoints,
            ).value
        except NonConvergenceError:
            return math.inf

    def integrate(
        self, h: Callable[[float], float], rel_tol: Optional[float] = None
    ) -> float:
        """
        ∫ h dν through the change of variables ∫ h dν = ∫₀^{ν((0,∞])} h(S⁻¹(v)) dv.

        Args:
            h (Callable[[float], float]): Non-negative integrand; h(∞) is used for the atom.
            rel_tol (Optional[float], optional): Overrides the measure's tolerance.

        Returns:
            float: The integral.

        Raises:
            NonConvergenceError: Propagated from quadrature.
        """
        atom_part: float = 0.0
        if self.atom_at_infinity > 0.0:
            at_infinity: float = float(h(math.inf))
            atom_part = 0.0 if at_infinity == 0.0 else self.atom_at_infinity * at_infinity
        if self.point_mass is not None:
            return atom_part + (self.total_mass - self.atom_at_infinity) * float(
                h(self.point_mass)
            )
        body = integrate_adaptive(
            lambda v: float(h(float(self.survival_inverse(v)))),
            self.atom_at_infinity,
            self.total_mass,
            rel_tol=rel_tol or self.rel_tol,
            points=self.jump_levels,
        )
        return atom_part + body.value

    def bernstein(self, x) -> np.ndarray:
        """
        Ψ(x) = κ + ∫ (1 - e^{-x u}) ν(du) = κ + ∫₀^∞ e^{-τ} (S(τ/x) - κ) dτ.
        """
        kappa: float = self.atom_at_infinity

        def evaluate(value: float) -> float:
            if value == 0.0:
                return 0.0
            if math.isinf(value):
                return self.total_mass
            if self.point_mass is not None:
                return kappa + (self.total_mass - kappa) * -math.expm1(
                    -value * self.point_mass
                )
            body = integrate_adaptive(
                lambda tau: math.exp(-tau)
                * (float(self.survival_function(tau / value)) - kappa),
                0.0,
                math.inf,
                rel_tol=self.rel_tol,
                points=[value * b for b in self.breakpoints],
            )
            return kappa + body.value

        return map_scalar(evaluate, x)

    def check_integrable(self) -> float:
        """
        ∫ min{u, 1} ν(du) = ∫₀^1 S(t) dt.

        Raises:
            InvalidArgumentError: If the integral is not finite.
        """
        try:
            value: float = integrate_adaptive(
                lambda t: float(self.survival_function(t)),
                0.0,
                1.0,
                rel_tol=self.rel_tol,
                points=[b for b in self.breakpoints if b < 1.0],
            ).value
        except NonConvergenceError as error:
            raise InvalidArgumentError(
                f"{self.name}: ∫ min(u, 1) ν(du) does not converge."
            ) from error
        return value

    def sample_jumps(self, size: int, rng: RngStream) -> np.ndarray:
        """
        Draws from the normalized law ν / ν((0, ∞]); ∞ marks a killing jump.

        Raises:
            NotCompoundPoissonError: If the total mass is infinite.
        """
        if not self.finite:
            raise NotCompoundPoissonError(
                f"{self.name}: normalized jump law needs finite total mass."
            )
        if self.jump_sampler is not None:
            return as_array(self.jump_sampler(size, rng))
        return self.survival_inverse(rng.uniform(size) * self.total_mass)


@dataclass(frozen=True)
class StieltjesMeasure:
    """
    A Stieltjes measure ρ on (0, ∞), represented by g_ρ(x) = ρ((0, 1/x)).

    Attributes:
        g_rho (ArrayFn): Non-increasing x ↦ ρ((0, 1/x)) on (0, ∞).
        total_mass (float): ρ((0, ∞)), possibly ∞.
        name (str): Label used in logs and reports.
        closed_g_rho_inverse (Optional[ArrayFn]): y ↦ inf{x : g_ρ(x) ≤ y}.
        rel_tol (float): Quadrature tolerance.
    """

    g_rho: ArrayFn
    total_mass: float
    name: str = "ρ"
    closed_g_rho_inverse: Optional[ArrayFn] = None
    rel_tol: float = DEFAULT_REL_TOL

    @property
    def finite(self) -> bool:
        return math.isfinite(self.total_mass)

    def g(self, x) -> np.ndarray:
        x = as_array(x)
        safe = np.where((x <= 0.0) | np.isinf(x), 1.0, x)
        values = as_array(self.g_rho(safe))
        values = np.where(x <= 0.0, self.total_mass, values)
        return np.where(np.isinf(x), 0.0, values)

    def g_rho_inverse(self, y) -> np.ndarray:
        """g_ρ⁻¹(y) = inf{x ≥ 0 : g_ρ(x) ≤ y}; ∞ at y = 0 unless ρ vanishes near 0."""
        y = as_array(y)
        if self.closed_g_rho_inverse is not None:
            inner = as_array(self.closed_g_rho_inverse(y))
        else:
            monotone = MonotoneFn(
                direction=Direction.DECREASING,
                evaluator=lambda x: float(self.g(x)),
            )
            clipped = np.clip(y, 0.0, self.total_mass)
            clipped = np.where(np.isinf(clipped), 0.0, clipped)
            inner = inverse_on_array(monotone, clipped)
        return np.where(y >= self.total_mass, 0.0, inner)

    def check_integrability(self) -> float:
        """
        ∫ (1 + u)⁻¹ ρ(du) = ∫₀^∞ g_ρ(1/u) (1 + u)⁻² du.

        Raises:
            InvalidArgumentError: If the integral is not finite.
        """
        try:
            return integrate_adaptive(
                lambda u: float(self.g(1.0 / u)) / (1.0 + u) ** 2 if u > 0 else 0.0,
                0.0,
                math.inf,
                rel_tol=self.rel_tol,
            ).value
        except NonConvergenceError as error:
            raise InvalidArgumentError(
                f"{self.name}: ∫ (1+u)⁻¹ ρ(du) does not converge."
            ) from error

    def bernstein(self, x) -> np.ndarray:
        """∫ x / (x + u) ρ(du) = ∫₀^∞ g_ρ(1/u) x / (x + u)² du."""

        def evaluate(value: float) -> float:
            if value == 0.0:
                return 0.0
            if math.isinf(value):
                return self.total_mass
            return integrate_adaptive(
                lambda w: float(self.g(1.0 / (value * w))) / (1.0 + w) ** 2
                if w > 0
                else 0.0,
                0.0,
                math.inf,
                rel_tol=self.rel_tol,
            ).value

        return map_scalar(evaluate, x)
