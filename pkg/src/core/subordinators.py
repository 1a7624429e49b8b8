"""Driftless Lévy subordinators L, given by their Bernstein functions Ψ_L."""

import math

import numpy as np
from scipy.special import gamma as gamma_fn

from src.errors import InvalidArgumentError
from src.rng import RngStream

from ._arrays import as_array
from .bernstein import BernsteinFunction
from .measures import LevyMeasure


def _require_positive(name: str, value: float) -> None:
    if not 0.0 < value < math.inf:
        raise InvalidArgumentError(f"{name} must be positive and finite, got {value}.")


def poisson(beta: float = 1.0) -> BernsteinFunction:
    """
    The Poisson process N with intensity β, ν = β δ₁ and Ψ(x) = β (1 - e^{-x}).
    """
    _require_positive("beta", beta)
    levy = LevyMeasure(
        survival=lambda t: np.where(as_array(t) < 1.0, beta, 0.0),
        total_mass=beta,
        name=f"poisson(β={beta:g})",
        closed_survival_inverse=lambda y: np.where(as_array(y) < beta, 1.0, 0.0),
        jump_mean_value=beta,
        jump_sampler=lambda size, rng: np.ones(size),
        size_biased_sampler=lambda size, rng: np.ones(size),
        point_mass=1.0,
        support_lower=1.0,
        breakpoints=(1.0,),
    )
    return BernsteinFunction(
        levy=levy,
        closed_form=lambda x: -beta * np.expm1(-as_array(x)),
        name=levy.name,
    )


def compound_poisson_exponential(beta: float = 1.0, rate: float = 1.0) -> BernsteinFunction:
    """
    Compound Poisson with intensity β and Exp(λ) jumps: ν(du) = β λ e^{-λu} du,
    Ψ(x) = β x / (x + λ).
    """
    _require_positive("beta", beta)
    _require_positive("rate", rate)

    def inverse(y: np.ndarray) -> np.ndarray:
        y = as_array(y)
        with np.errstate(divide="ignore"):
            values = np.log(beta / np.where(y > 0.0, y, 0.0)) / rate
        return np.where(y < beta, values, 0.0)

    def size_biased(size: int, rng: RngStream) -> np.ndarray:
        return rng.gamma(2.0, size) / rate

    levy = LevyMeasure(
        survival=lambda t: beta * np.exp(-rate * as_array(t)),
        total_mass=beta,
        name=f"cp-exp(β={beta:g},λ={rate:g})",
        closed_survival_inverse=inverse,
        jump_mean_value=beta / rate,
        jump_sampler=lambda size, rng: rng.exponential(size) / rate,
        size_biased_sampler=size_biased,
    )
    return BernsteinFunction(
        levy=levy,
        closed_form=lambda x: beta * as_array(x) / (as_array(x) + rate),
        name=levy.name,
    )


def compound_poisson_uniform(beta: float = 1.0) -> BernsteinFunction:
    """
    Compound Poisson with intensity β and U(0, 1] jumps,
    Ψ(x) = β (1 - (1 - e^{-x}) / x).
    """
    _require_positive("beta", beta)

    def closed(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        safe = np.where(x > 0.0, x, 1.0)
        return np.where(x > 0.0, beta * (1.0 + np.expm1(-safe) / safe), 0.0)

    levy = LevyMeasure(
        survival=lambda t: beta * np.clip(1.0 - as_array(t), 0.0, 1.0),
        total_mass=beta,
        name=f"cp-uniform(β={beta:g})",
        closed_survival_inverse=lambda y: np.clip(1.0 - as_array(y) / beta, 0.0, 1.0),
        jump_mean_value=beta / 2.0,
        jump_sampler=lambda size, rng: rng.uniform(size),
        size_biased_sampler=lambda size, rng: np.sqrt(rng.uniform(size)),
        breakpoints=(1.0,),
    )
    return BernsteinFunction(levy=levy, closed_form=closed, name=levy.name)


def compound_poisson_pareto(beta: float = 1.0, alpha: float = 1.5) -> BernsteinFunction:
    """
    Compound Poisson with Pareto(α) jumps on (1, ∞): ν(du) = β α u^{-1-α} du.

    The jump mean β α / (α - 1) is infinite for α ≤ 1. No closed Ψ.
    """
    _require_positive("beta", beta)
    _require_positive("alpha", alpha)

    def survival(t: np.ndarray) -> np.ndarray:
        t = as_array(t)
        return beta * np.where(t < 1.0, 1.0, np.power(np.maximum(t, 1.0), -alpha))

    def inverse(y: np.ndarray) -> np.ndarray:
        y = as_array(y)
        with np.errstate(divide="ignore"):
            values = np.power(beta / np.where(y > 0.0, y, 0.0), 1.0 / alpha)
        return np.where(y < beta, values, 0.0)

    size_biased = None
    if alpha > 1.0:
        size_biased = lambda size, rng: np.power(rng.uniform(size), -1.0 / (alpha - 1.0))

    levy = LevyMeasure(
        survival=survival,
        total_mass=beta,
        name=f"cp-pareto(β={beta:g},α={alpha:g})",
        closed_survival_inverse=inverse,
        jump_mean_value=beta * alpha / (alpha - 1.0) if alpha > 1.0 else math.inf,
        jump_sampler=lambda size, rng: np.power(rng.uniform(size), -1.0 / alpha),
        size_biased_sampler=size_biased,
        support_lower=1.0,
        breakpoints=(1.0,),
    )
    return BernsteinFunction(levy=levy, name=levy.name)


def stable(theta: float = 0.5) -> BernsteinFunction:
    """
    The θ-stable subordinator, ν(du) = θ u^{-1-θ} du / Γ(1-θ), Ψ(x) = x^θ.
    Infinite activity.
    """
    if not 0.0 < theta < 1.0:
        raise InvalidArgumentError(f"theta must lie in (0, 1), got {theta}.")
    scale: float = float(gamma_fn(1.0 - theta))

    def inverse(y: np.ndarray) -> np.ndarray:
        y = as_array(y)
        with np.errstate(divide="ignore"):
            return np.power(y * scale, -1.0 / theta)

    levy = LevyMeasure(
        survival=lambda t: np.power(as_array(t), -theta) / scale,
        total_mass=math.inf,
        name=f"stable(θ={theta:g})",
        closed_survival_inverse=inverse,
        jump_mean_value=math.inf,
    )
    return BernsteinFunction(
        levy=levy,
        closed_form=lambda x: np.power(as_array(x), theta),
        name=levy.name,
    )


def killed(base: BernsteinFunction, kappa: float) -> BernsteinFunction:
    """
    The subordinator `base` killed at rate κ: ν gains the atom κ δ_∞, Ψ gains κ.
    """
    _require_positive("kappa", kappa)
    nu = base.levy
    mass: float = nu.total_mass + kappa
    kill_probability: float = kappa / mass

    def inverse(y: np.ndarray) -> np.ndarray:
        y = as_array(y)
        shifted = nu.survival_inverse(np.maximum(y - kappa, 0.0))
        return np.where(y < kappa + nu.atom_at_infinity, math.inf, shifted)

    def jump_sampler(size: int, rng: RngStream) -> np.ndarray:
        jumps = nu.sample_jumps(size, rng)
        return np.where(rng.uniform(size) < kill_probability, math.inf, jumps)

    levy = LevyMeasure(
        survival=lambda t: nu.survival_function(t) + kappa,
        total_mass=mass,
        atom_at_infinity=nu.atom_at_infinity + kappa,
        name=f"killed({nu.name},κ={kappa:g})",
        closed_survival_inverse=inverse,
        jump_sampler=jump_sampler if nu.finite else None,
        support_lower=nu.support_lower,
        breakpoints=nu.breakpoints,
        jump_levels=tuple(level + kappa for level in nu.jump_levels),
    )
    closed = None
    if base.closed_form is not None:
        closed = lambda x: kappa + as_array(base.closed_form(x))
    return BernsteinFunction(levy=levy, closed_form=closed, name=levy.name)
