"""
The Pickands dependence measure Q of ℓ_d: ℓ_d(t) = d E[max_k t_k Q_k].
"""

from typing import TYPE_CHECKING, Optional

import numpy as np

from src.core import DistributionF
from src.core._arrays import as_array
from src.errors import InvalidArgumentError
from src.rng import RngStream
from src.samplers.tilted import ZSampler

if TYPE_CHECKING:
    from src.idt import IdtModel


def sample_M(F: DistributionF, z: float, rng: RngStream) -> float:
    """
    One draw from the size-biased law x dF^z(x) / Ψ_F(z).

    Raises:
        MSamplerUnavailableError: If F has no exact sampler for this law.
    """
    if not z > 0.0:
        raise InvalidArgumentError(f"z must be positive, got {z}.")
    return float(F.sample_size_biased(as_array([z]), rng)[0])


def sample_Q_batch(
    model: "IdtModel",
    d: int,
    n: int,
    rng: RngStream,
    z_sampler: Optional[ZSampler] = None,
) -> np.ndarray:
    """
    n independent draws of Q on the unit simplex, one per row.

    Each row: D uniform on {1, …, d}, Z from the tilted law, X₁, …, X_d iid
    from F^Z, M from x dF^Z(x) / Ψ_F(Z); W = X with W_D replaced by M, and
    Q = W / Σ W. A killing mark Z = ∞ puts every W_k at u_F.

    Raises:
        MSamplerUnavailableError: If F has no exact size-biased sampler.
    """
    if d < 1:
        raise InvalidArgumentError(f"d must be at least 1, got {d}.")
    F = model.F
    sampler: ZSampler = z_sampler or ZSampler(model)
    chosen = rng.integers(0, d, size=n)
    z = sampler.sample(n, rng)
    killed = np.isinf(z)
    finite_z = np.where(killed, 1.0, z)
    weights = as_array(F.sample_power(np.repeat(finite_z, d).reshape(n, d), rng))
    weights[np.arange(n), chosen] = as_array(F.sample_size_biased(finite_z, rng))
    weights[killed] = F.right_support
    return weights / weights.sum(axis=1, keepdims=True)


def sample_Q(model: "IdtModel", d: int, rng: RngStream) -> np.ndarray:
    """One draw of the Pickands vector Q (d ≥ 2)."""
    if d < 2:
        raise InvalidArgumentError(f"d must be at least 2, got {d}.")
    return sample_Q_batch(model, d, 1, rng)[0]
