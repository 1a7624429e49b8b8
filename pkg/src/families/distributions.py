"""
Distribution functions F with closed forms for F⁻¹, Ψ_F and the samplers of
F^z and x dF^z(x) / Ψ_F(z).
"""

import math

import numpy as np
from scipy.special import digamma

from src.core import DistributionF
from src.core._arrays import as_array, neg_log
from src.errors import InvalidArgumentError
from src.rng import RngStream

from .closed_forms import exp_e1

_E_INV: float = math.exp(-1.0)
_MOLCHANOV_BREAKPOINTS: int = 200


def _accept_reject(z: np.ndarray, rng: RngStream, propose, log_accept) -> np.ndarray:
    """Vectorized rejection sampling; `propose(z)` and `log_accept(x, z)` act on arrays."""
    flat = z.ravel()
    out = np.empty_like(flat)
    pending = np.arange(flat.size)
    while pending.size:
        proposals = propose(flat[pending])
        accept = np.log(rng.uniform(pending.size)) <= log_accept(proposals, flat[pending])
        out[pending[accept]] = proposals[accept]
        pending = pending[~accept]
    return out.reshape(z.shape)


def levy_bernoulli() -> DistributionF:
    """
    F = e^{-1} on [0, 1) and 1 from 1 on, so Ψ_F(x) = 1 - e^{-x} and H = L.
    """

    def cdf(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        return np.where(x < 0.0, 0.0, np.where(x < 1.0, _E_INV, 1.0))

    def left_limit(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        return np.where(x <= 0.0, 0.0, np.where(x <= 1.0, _E_INV, 1.0))

    def power(z: np.ndarray, rng: RngStream) -> np.ndarray:
        z = as_array(z)
        uniforms = as_array(rng.uniform(z.shape if z.shape else None))
        return np.where(uniforms > np.exp(-z), 1.0, 0.0)

    return DistributionF(
        cdf=cdf,
        left_support=0.0,
        right_support=1.0,
        name="levy-bernoulli",
        left_limit=left_limit,
        closed_inverse=lambda p: np.where(as_array(p) <= _E_INV, 0.0, 1.0),
        closed_psi=lambda x: -np.expm1(-as_array(x)),
        power_sampler=power,
        size_biased_sampler=lambda z, rng: np.ones_like(as_array(z)),
        breakpoints=(1.0,),
    )


def german_linear() -> DistributionF:
    """F(x) = min{x, 1}, Ψ_F(x) = x / (x + 1)."""

    def power(z: np.ndarray, rng: RngStream) -> np.ndarray:
        z = as_array(z)
        return np.power(rng.uniform(z.shape if z.shape else None), 1.0 / z)

    def size_biased(z: np.ndarray, rng: RngStream) -> np.ndarray:
        z = as_array(z)
        return np.power(rng.uniform(z.shape if z.shape else None), 1.0 / (z + 1.0))

    return DistributionF(
        cdf=lambda x: np.clip(as_array(x), 0.0, 1.0),
        left_support=0.0,
        right_support=1.0,
        name="german-linear",
        closed_inverse=lambda p: as_array(p),
        closed_psi=lambda x: as_array(x) / (as_array(x) + 1.0),
        power_sampler=power,
        size_biased_sampler=size_biased,
        breakpoints=(1.0,),
    )


def german_exp() -> DistributionF:
    """F(x) = min{exp(x - 1), 1} on [0, ∞), with an atom e^{-1} at 0."""

    def cdf(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        return np.where(x < 0.0, 0.0, np.exp(np.minimum(x, 1.0) - 1.0))

    def left_limit(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        return np.where(x <= 0.0, 0.0, np.exp(np.minimum(x, 1.0) - 1.0))

    def inverse(p: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.maximum(0.0, 1.0 + np.log(as_array(p)))

    def psi(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        return 1.0 + np.expm1(-x) / x

    def power(z: np.ndarray, rng: RngStream) -> np.ndarray:
        z = as_array(z)
        uniforms = as_array(rng.uniform(z.shape if z.shape else None))
        return np.maximum(0.0, 1.0 + np.log(uniforms) / z)

    def size_biased(z: np.ndarray, rng: RngStream) -> np.ndarray:
        # Density ∝ x e^{z(x-1)} on (0, 1), bounded by 1.
        return _accept_reject(
            as_array(z),
            rng,
            propose=lambda zs: as_array(rng.uniform(zs.size)),
            log_accept=lambda x, zs: np.log(x) + zs * (x - 1.0),
        )

    return DistributionF(
        cdf=cdf,
        left_support=0.0,
        right_support=1.0,
        name="german-exp",
        left_limit=left_limit,
        closed_inverse=inverse,
        closed_psi=psi,
        power_sampler=power,
        size_biased_sampler=size_biased,
        breakpoints=(1.0,),
    )


def frechet_scale(theta: float) -> float:
    """c_θ = Γ(1 - θ)^{-1/θ}."""
    return float(np.exp(-math.lgamma(1.0 - theta) / theta))


def frechet(theta: float = 0.5) -> DistributionF:
    """
    F(x) = exp(-c_θ x^{-1/θ}), the Fréchet law scaled so that Ψ_F(x) = x^θ.
    """
    if not 0.0 < theta < 1.0:
        raise InvalidArgumentError(f"theta must lie in (0, 1), got {theta}.")
    c: float = frechet_scale(theta)

    def cdf(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        safe = np.where(x > 0.0, x, 1.0)
        return np.where(x > 0.0, np.exp(-c * np.power(safe, -1.0 / theta)), 0.0)

    def inverse(p: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return c**theta * np.power(neg_log(p), -theta)

    def power(z: np.ndarray, rng: RngStream) -> np.ndarray:
        z = as_array(z)
        exponentials = as_array(rng.exponential(z.shape if z.shape else None))
        return np.power(z * c / exponentials, theta)

    def size_biased(z: np.ndarray, rng: RngStream) -> np.ndarray:
        z = as_array(z)
        shape = z.shape if z.shape else None
        return np.power(z * c, theta) * np.power(rng.gamma(1.0 - theta, shape), -theta)

    return DistributionF(
        cdf=cdf,
        left_support=0.0,
        right_support=math.inf,
        name=f"frechet(θ={theta:g})",
        closed_inverse=inverse,
        closed_psi=lambda x: np.power(as_array(x), theta),
        power_sampler=power,
        size_biased_sampler=size_biased,
    )


def galambos() -> DistributionF:
    """F(x) = 1 - e^{-x}, Ψ_F(x) = digamma(x + 1) + γ."""

    def power(z: np.ndarray, rng: RngStream) -> np.ndarray:
        z = as_array(z)
        uniforms = as_array(rng.uniform(z.shape if z.shape else None))
        return -np.log1p(-np.exp(np.log(uniforms) / z))

    def size_biased(z: np.ndarray, rng: RngStream) -> np.ndarray:
        # Target ∝ x (1 - e^{-x})^{z-1} e^{-x}.
        z = as_array(z)
        flat = z.ravel()
        out = np.empty_like(flat)
        large = flat >= 1.0
        if np.any(large):
            out[large] = _accept_reject(
                flat[large],
                rng,
                propose=lambda zs: as_array(rng.gamma(2.0, zs.size)),
                log_accept=lambda x, zs: (zs - 1.0) * np.log(-np.expm1(-x)),
            )
        if np.any(~large):
            # Envelope (x^z + x^{z+1}) e^{-x}: Gamma(z+1) and Gamma(z+2) mixed by mass.
            def propose(zs: np.ndarray) -> np.ndarray:
                first = rng.uniform(zs.size) * (1.0 + (zs + 1.0)) < 1.0
                return as_array(rng.gamma(np.where(first, zs + 1.0, zs + 2.0)))

            def log_accept(x: np.ndarray, zs: np.ndarray) -> np.ndarray:
                return (
                    (zs - 1.0) * np.log(-np.expm1(-x))
                    + (1.0 - zs) * np.log(x)
                    - np.log1p(x)
                )

            out[~large] = _accept_reject(flat[~large], rng, propose, log_accept)
        return out.reshape(z.shape)

    return DistributionF(
        cdf=lambda x: np.where(as_array(x) < 0.0, 0.0, -np.expm1(-as_array(x))),
        left_support=0.0,
        right_support=math.inf,
        name="galambos",
        closed_inverse=lambda p: -np.log1p(-as_array(p)),
        closed_psi=lambda x: digamma(as_array(x) + 1.0) + np.euler_gamma,
        power_sampler=power,
        size_biased_sampler=size_biased,
    )


def molchanov_floor() -> DistributionF:
    """
    F(x) = exp(1 - ⌈1/x⌉) on (0, 1], the right-continuous version of
    exp(-⌊1/x⌋); Ψ_F(x) = (e^x - 1)(-log(1 - e^{-x})).
    """

    def cdf(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        safe = np.where(x > 0.0, x, 1.0)
        return np.where(x > 0.0, np.exp(1.0 - np.ceil(1.0 / np.minimum(safe, 1.0))), 0.0)

    def left_limit(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        safe = np.where(x > 0.0, x, 1.0)
        values = np.exp(-np.floor(1.0 / safe))
        return np.where(x <= 0.0, 0.0, np.where(x > 1.0, 1.0, values))

    def inverse(p: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 1.0 / np.floor(1.0 + neg_log(p))

    def psi(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        q = np.exp(-x)
        safe_q = np.where(q > 0.0, q, 1.0)
        return np.where(q > 0.0, -np.expm1(-x) * (-np.log1p(-safe_q) / safe_q), 1.0)

    def size_biased(z: np.ndarray, rng: RngStream) -> np.ndarray:
        z = as_array(z)
        return 1.0 / as_array(rng.logseries(np.exp(-z)))

    return DistributionF(
        cdf=cdf,
        left_support=0.0,
        right_support=1.0,
        name="molchanov-floor",
        left_limit=left_limit,
        closed_inverse=inverse,
        closed_psi=psi,
        size_biased_sampler=size_biased,
        breakpoints=tuple(1.0 / n for n in range(1, _MOLCHANOV_BREAKPOINTS + 1)),
    )


def molchanov_exp() -> DistributionF:
    """F(x) = min{1, exp(1 - 1/x)}, Ψ_F(x) = x e^x E₁(x)."""

    def cdf(x: np.ndarray) -> np.ndarray:
        x = as_array(x)
        safe = np.where(x > 0.0, x, 1.0)
        return np.where(x > 0.0, np.exp(np.minimum(0.0, 1.0 - 1.0 / safe)), 0.0)

    def inverse(p: np.ndarray) -> np.ndarray:
        return 1.0 / (1.0 + neg_log(p))

    def power(z: np.ndarray, rng: RngStream) -> np.ndarray:
        z = as_array(z)
        exponentials = as_array(rng.exponential(z.shape if z.shape else None))
        return 1.0 / (1.0 + exponentials / z)

    def size_biased(z: np.ndarray, rng: RngStream) -> np.ndarray:
        # M = 1/(1 + W), W ~ Exp(z) accepted with probability 1/(1 + W).
        waits = _accept_reject(
            as_array(z),
            rng,
            propose=lambda zs: as_array(rng.exponential(zs.size)) / zs,
            log_accept=lambda w, zs: -np.log1p(w),
        )
        return 1.0 / (1.0 + waits)

    return DistributionF(
        cdf=cdf,
        left_support=0.0,
        right_support=1.0,
        name="molchanov-exp",
        closed_inverse=inverse,
        closed_psi=lambda x: as_array(x) * exp_e1(x),
        power_sampler=power,
        size_biased_sampler=size_biased,
        breakpoints=(1.0,),
    )
