import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.errors import InvalidArgumentError, NotInFhatError
from src.logger import ColoredLogger, LogLevel

from ._arrays import ArrayFn, as_array, neg_log
from .distribution import DistributionF
from .measures import LevyMeasure, StieltjesMeasure

logger = ColoredLogger(name=__name__)


@dataclass(frozen=True)
class BernsteinFunction:
    """
    A Bernstein function Ψ(x) = κ + ∫ (1 - e^{-x u}) ν(du) without drift.

    Evaluation order: the closed form if one is registered, then a custom
    quadrature route (for Ψ_F this is ∫ (1 - F(s)^x) ds), then the generic
    Lévy-Khinchin quadrature on the survival function of ν.

    Attributes:
        levy (LevyMeasure): The driving Lévy measure.
        closed_form (Optional[ArrayFn]): Ψ in closed form.
        quadrature (Optional[ArrayFn]): Preferred numeric route when no closed form exists.
        name (str): Label used in logs and reports.
    """

    levy: LevyMeasure
    closed_form: Optional[ArrayFn] = None
    quadrature: Optional[ArrayFn] = None
    name: str = "Ψ"

    def __call__(self, x) -> np.ndarray:
        x = as_array(x)
        if self.closed_form is None:
            return self.evaluate_numerically(x)
        safe = np.where(np.isinf(x), 1.0, x)
        values = np.where(x == 0.0, 0.0, as_array(self.closed_form(safe)))
        return np.where(np.isinf(x), self.limit, values)

    def evaluate_numerically(self, x) -> np.ndarray:
        """Ψ(x) ignoring any closed form."""
        if self.quadrature is not None:
            return as_array(self.quadrature(as_array(x)))
        return self.levy.bernstein(x)

    @property
    def has_closed_form(self) -> bool:
        return self.closed_form is not None

    @property
    def bounded(self) -> bool:
        return self.levy.finite

    @property
    def killing(self) -> bool:
        return self.levy.atom_at_infinity > 0.0

    @property
    def limit(self) -> float:
        """lim Ψ(x) as x → ∞, the total mass of ν."""
        return self.levy.total_mass

    @property
    def derivative_at_zero(self) -> float:
        return self.levy.jump_mean


def levy_from_distribution(F: DistributionF) -> LevyMeasure:
    """
    The Lévy measure ν_F with ν_F((t, ∞]) = F⁻¹(e^{-t}).

    The survival inverse is exact: inf{t : F⁻¹(e^{-t}) ≤ y} = -log F(y).
    The atom at ∞ is the left end point of F and the total mass is u_F.

    Args:
        F (DistributionF): The distribution function.

    Returns:
        LevyMeasure: ν_F.
    """

    def survival(t: np.ndarray) -> np.ndarray:
        return F.inverse(np.exp(-as_array(t)))

    t_breakpoints: set[float] = set()
    for b in F.breakpoints:
        for level in (F.neg_log_cdf(b), F.weight(b)):
            if 0.0 < float(level) < math.inf:
                t_breakpoints.add(float(level))

    return LevyMeasure(
        survival=survival,
        total_mass=F.right_support,
        atom_at_infinity=F.left_support,
        name=f"ν[{F.name}]",
        closed_survival_inverse=F.neg_log_cdf,
        support_lower=float(F.weight(F.right_support)) if F.bounded else 0.0,
        breakpoints=tuple(sorted(t_breakpoints)),
        jump_levels=tuple(b for b in F.breakpoints if 0.0 < b < F.right_support),
        rel_tol=F.rel_tol,
    )


def psi_from_distribution(F: DistributionF) -> BernsteinFunction:
    """
    The Bernstein function Ψ_F(x) = ∫₀^∞ (1 - F(s)^x) ds.

    Args:
        F (DistributionF): The distribution function.

    Returns:
        BernsteinFunction: Ψ_F, closed form when F registers one, driven by ν_F.

    Raises:
        NonConvergenceError: Propagated from quadrature on evaluation.
    """
    return BernsteinFunction(
        levy=levy_from_distribution(F),
        closed_form=F.closed_psi,
        quadrature=F.psi_quadrature,
        name=f"Ψ[{F.name}]",
    )


def distribution_from_levy(
    nu: LevyMeasure, closed_psi: Optional[ArrayFn] = None
) -> DistributionF:
    """
    The distribution F_ν with Ψ_{F_ν} = Ψ_ν.

    F_ν(t) = 0 for t < ν({∞}), exp(-S_ν⁻¹(t)) up to the total mass and 1
    from there on. Its inverse is exact: F_ν⁻¹(p) = S_ν(-log p).

    Args:
        nu (LevyMeasure): The Lévy measure.
        closed_psi (Optional[ArrayFn], optional): Closed Ψ_ν to carry over.

    Returns:
        DistributionF: F_ν.
    """
    atom: float = nu.atom_at_infinity
    mass: float = nu.total_mass

    def cdf(t: np.ndarray) -> np.ndarray:
        t = as_array(t)
        inner = np.exp(-nu.survival_inverse(np.where(t < atom, mass, t)))
        inner = np.where(t < atom, 0.0, inner)
        return np.where(t >= mass, 1.0, inner)

    def inverse(p: np.ndarray) -> np.ndarray:
        return nu.survival_function(neg_log(p))

    breakpoints = {atom, *nu.jump_levels}
    if math.isfinite(mass):
        breakpoints.add(mass)

    return DistributionF(
        cdf=cdf,
        left_support=atom,
        right_support=mass,
        name=f"F[{nu.name}]",
        closed_inverse=inverse,
        closed_psi=closed_psi,
        breakpoints=tuple(sorted(b for b in breakpoints if b > 0.0)),
        rel_tol=nu.rel_tol,
    )


def stieltjes_from_distribution(F: DistributionF) -> StieltjesMeasure:
    """
    The Stieltjes measure ρ_F, the image of ν_F under u ↦ 1/u.

    g_ρ(x) = ρ_F((0, 1/x)) = ν_F((x, ∞]) = F⁻¹(e^{-x}) and g_ρ⁻¹(y) = -log F(y).

    Args:
        F (DistributionF): A distribution with left end point 0.

    Returns:
        StieltjesMeasure: ρ_F.

    Raises:
        NotInFhatError: If the left end point of F is positive.
    """
    if F.left_support > 0.0:
        raise NotInFhatError(
            f"{F.name} has left end point {F.left_support} > 0, so ν_F has an atom at ∞."
        )
    return StieltjesMeasure(
        g_rho=lambda x: F.inverse(np.exp(-as_array(x))),
        total_mass=F.right_support,
        name=f"ρ[{F.name}]",
        closed_g_rho_inverse=F.neg_log_cdf,
        rel_tol=F.rel_tol,
    )


def distribution_from_stieltjes(
    rho: StieltjesMeasure, closed_psi: Optional[ArrayFn] = None
) -> DistributionF:
    """
    The distribution F_ρ(x) = exp(-g_ρ⁻¹(x)) for x < ρ((0, ∞)), 1 beyond.

    Args:
        rho (StieltjesMeasure): The Stieltjes measure.
        closed_psi (Optional[ArrayFn], optional): Closed Ψ_{F_ρ} to carry over.

    Returns:
        DistributionF: F_ρ, with left end point 0 and u_F = ρ((0, ∞)).

    Raises:
        InvalidArgumentError: If ρ vanishes, since F_ρ would have mean 0.
    """
    mass: float = rho.total_mass
    if not mass > 0.0:
        raise InvalidArgumentError(
            f"{rho.name} has total mass 0: F_ρ is degenerate at 0 and has mean 0."
        )

    def cdf(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        inner = np.exp(-rho.g_rho_inverse(np.clip(x, 0.0, None)))
        inner = np.where(x < 0.0, 0.0, inner)
        return np.where(x >= mass, 1.0, inner)

    def inverse(p: np.ndarray) -> np.ndarray:
        return rho.g(neg_log(p))

    logger.log(LogLevel.DEBUG, f"Built F from {rho.name} with u_F = {mass}.")
    return DistributionF(
        cdf=cdf,
        left_support=0.0,
        right_support=mass,
        name=f"F[{rho.name}]",
        closed_inverse=inverse,
        closed_psi=closed_psi,
        breakpoints=(mass,) if math.isfinite(mass) else (),
        rel_tol=rho.rel_tol,
    )
