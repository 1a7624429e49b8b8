"""
Stieltjes measures ρ with closed g_ρ, g_ρ⁻¹ and complete Bernstein function
Ψ(x) = ∫ x / (x + u) ρ(du).
"""

import math
from typing import NamedTuple

import numpy as np

from src.core import StieltjesMeasure
from src.core._arrays import ArrayFn, as_array
from src.errors import InvalidArgumentError


class BondessonLaw(NamedTuple):
    """
    NamedTuple pairing a Stieltjes measure with its Bernstein function.

    Attributes:
        rho (StieltjesMeasure): The Stieltjes measure.
        psi (ArrayFn): Ψ(x) = ∫ x / (x + u) ρ(du) in closed form.
    """

    rho: StieltjesMeasure
    psi: ArrayFn


def _require_theta(theta: float) -> None:
    if not 0.0 < theta < math.inf:
        raise InvalidArgumentError(f"theta must be positive and finite, got {theta}.")


def family_45() -> BondessonLaw:
    """ρ(du) = (1 - u) du on (0, 1), mass 1/2; compound Poisson."""

    def g(x: np.ndarray) -> np.ndarray:
        r = np.minimum(1.0 / as_array(x), 1.0)
        return 0.5 * r * (2.0 - r)

    def g_inverse(y: np.ndarray) -> np.ndarray:
        y = np.clip(as_array(y), 0.0, 0.5)
        with np.errstate(divide="ignore"):
            return 1.0 / (1.0 - np.sqrt(1.0 - 2.0 * y))

    def psi(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        return x * (1.0 + x) * np.log1p(1.0 / x) - x

    rho = StieltjesMeasure(
        g_rho=g, total_mass=0.5, name="bondesson-45", closed_g_rho_inverse=g_inverse
    )
    return BondessonLaw(rho=rho, psi=psi)


def family_5(theta: float = 1.0) -> BondessonLaw:
    """ρ(du) = du / (π √(u - θ)) on (θ, ∞), Ψ(x) = x / √(x + θ)."""
    _require_theta(theta)

    def g(x: np.ndarray) -> np.ndarray:
        r = 1.0 / as_array(x)
        return (2.0 / math.pi) * np.sqrt(np.maximum(r - theta, 0.0))

    def g_inverse(y: np.ndarray) -> np.ndarray:
        return 1.0 / (theta + (math.pi * as_array(y) / 2.0) ** 2)

    rho = StieltjesMeasure(
        g_rho=g,
        total_mass=math.inf,
        name=f"bondesson-5(θ={theta:g})",
        closed_g_rho_inverse=g_inverse,
    )
    return BondessonLaw(rho=rho, psi=lambda x: as_array(x) / np.sqrt(as_array(x) + theta))


def family_33(theta: float = 1.0) -> BondessonLaw:
    """ρ(du) = du / (θ + u) on (0, ∞), Ψ(x) = x log(θ/x) / (θ - x)."""
    _require_theta(theta)

    def g(x: np.ndarray) -> np.ndarray:
        return np.log1p(1.0 / (theta * as_array(x)))

    def g_inverse(y: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 1.0 / (theta * np.expm1(as_array(y)))

    def psi(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        h = (x - theta) / theta
        safe = np.where(np.abs(h) > 1e-8, h, 1.0)
        ratio = np.where(np.abs(h) > 1e-8, np.log1p(safe) / safe, 1.0 - h / 2.0)
        return (x / theta) * ratio

    rho = StieltjesMeasure(
        g_rho=g,
        total_mass=math.inf,
        name=f"bondesson-33(θ={theta:g})",
        closed_g_rho_inverse=g_inverse,
    )
    return BondessonLaw(rho=rho, psi=psi)


def family_64(theta: float = 1.0) -> BondessonLaw:
    """ρ(du) = du / (2 √u) on (θ, ∞), Ψ(x) = √x arctan √(x/θ)."""
    _require_theta(theta)
    root: float = math.sqrt(theta)

    def g(x: np.ndarray) -> np.ndarray:
        return np.maximum(np.sqrt(1.0 / as_array(x)) - root, 0.0)

    def g_inverse(y: np.ndarray) -> np.ndarray:
        return 1.0 / (as_array(y) + root) ** 2

    def psi(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        return np.sqrt(x) * np.arctan(np.sqrt(x / theta))

    rho = StieltjesMeasure(
        g_rho=g,
        total_mass=math.inf,
        name=f"bondesson-64(θ={theta:g})",
        closed_g_rho_inverse=g_inverse,
    )
    return BondessonLaw(rho=rho, psi=psi)
