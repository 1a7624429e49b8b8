"""
Sampling the tilted mark law Ψ_F(z) ν_L(dz) / Ψ_H(1) of the LePage series and
of the Pickands sampler.
"""

import math
from typing import TYPE_CHECKING

import numpy as np
from scipy.integrate import cumulative_trapezoid

from src.core._arrays import as_array
from src.errors import NonConvergenceError, ZSamplerUnavailableError
from src.logger import ColoredLogger, LogLevel
from src.rng import RngStream

if TYPE_CHECKING:
    from src.idt import IdtModel

logger = ColoredLogger(name=__name__)

TABLE_SIZE: int = 4096


class ZSampler:
    """
    Sampler of Z ~ Ψ_F(z) ν_L(dz) / Ψ_H(1).

    Strategies, first applicable wins:

    - "point-mass": ν_L = β δ_a, so Z ≡ a.
    - "bounded-rejection": ν_L finite and u_F < ∞; propose from ν_L, accept
      with probability Ψ_F(z) / u_F.
    - "mixture-rejection": ν_L finite with a size-biased jump sampler; propose
      from (1 + z) ν_L(dz), accept with Ψ_F(z) / ((1 + z) Ψ_F(1)).
    - "table": numeric inverse cdf on the survival scale v = ν_L((z, ∞]).

    Args:
        model (IdtModel): The model.
        table_size (int, optional): Grid size of the numeric table.

    Raises:
        ZSamplerUnavailableError: If no strategy applies.
    """

    def __init__(self, model: "IdtModel", table_size: int = TABLE_SIZE) -> None:
        self.model: "IdtModel" = model
        self.nu = model.L.levy
        self.F = model.F
        self.psi_h_one: float = model.psi_h_one
        self.table_size: int = table_size
        if self.nu.point_mass is not None:
            self.strategy: str = "point-mass"
        elif self.nu.finite and self.F.bounded:
            self.strategy = "bounded-rejection"
        elif (
            self.nu.finite
            and self.nu.size_biased_sampler is not None
            and self.nu.jump_mean < math.inf
        ):
            self.strategy = "mixture-rejection"
        else:
            self.strategy = "table"
            self.__build_table()
        logger.log(LogLevel.DEBUG, f"{model.family_id}: Z sampled by {self.strategy}.")

    def __build_table(self) -> None:
        kappa: float = self.nu.atom_at_infinity
        mass: float = self.nu.total_mass
        nodes = 0.5 * (1.0 - np.cos(np.pi * np.arange(1, self.table_size) / self.table_size))
        if math.isfinite(mass):
            levels = kappa + nodes * (mass - kappa)
            jacobian = np.full(nodes.shape, mass - kappa)
        else:
            levels = kappa + nodes / (1.0 - nodes)
            jacobian = 1.0 / (1.0 - nodes) ** 2
        try:
            z = as_array(self.nu.survival_inverse(levels))
            density = as_array(self.F.psi(z)) * jacobian
        except NonConvergenceError as error:
            raise ZSamplerUnavailableError(
                f"{self.model.family_id}: Ψ_F could not be tabulated."
            ) from error
        cdf = cumulative_trapezoid(density, nodes, initial=0.0)
        if not np.all(np.isfinite(cdf)) or not cdf[-1] > 0.0:
            raise ZSamplerUnavailableError(
                f"{self.model.family_id}: tilted law of Z is not normalizable on a grid."
            )
        self.__nodes = nodes
        self.__levels_cdf = cdf / cdf[-1]
        self.__kill_probability: float = (
            kappa * self.F.right_support / self.psi_h_one if kappa > 0.0 else 0.0
        )
        logger.log(
            LogLevel.TRUNCATE,
            f"{self.model.family_id}: Z drawn from a {self.table_size}-point table.",
        )

    def __level_to_jump(self, nodes: np.ndarray) -> np.ndarray:
        kappa: float = self.nu.atom_at_infinity
        mass: float = self.nu.total_mass
        if math.isfinite(mass):
            return as_array(self.nu.survival_inverse(kappa + nodes * (mass - kappa)))
        return as_array(self.nu.survival_inverse(kappa + nodes / (1.0 - nodes)))

    def __rejection(self, size: int, rng: RngStream, propose, accept_bound) -> np.ndarray:
        out = np.empty(size)
        pending = np.arange(size)
        while pending.size:
            proposals = propose(pending.size)
            ceiling = accept_bound(proposals)
            accept = rng.uniform(pending.size) * ceiling <= as_array(self.F.psi(proposals))
            out[pending[accept]] = proposals[accept]
            pending = pending[~accept]
        return out

    def sample(self, size: int, rng: RngStream) -> np.ndarray:
        """Draw `size` independent copies of Z."""
        if size == 0:
            return np.empty(0)
        if self.strategy == "point-mass":
            return np.full(size, float(self.nu.point_mass))
        if self.strategy == "bounded-rejection":
            u_F: float = self.F.right_support
            return self.__rejection(
                size,
                rng,
                propose=lambda k: self.nu.sample_jumps(k, rng),
                accept_bound=lambda z: np.full(z.shape, u_F),
            )
        if self.strategy == "mixture-rejection":
            mass: float = self.nu.total_mass
            share: float = mass / (mass + self.nu.jump_mean)
            psi_one: float = float(self.F.psi(1.0))

            def propose(k: int) -> np.ndarray:
                plain = rng.uniform(k) < share
                draws = as_array(self.nu.size_biased_sampler(k, rng))
                return np.where(plain, self.nu.sample_jumps(k, rng), draws)

            return self.__rejection(
                size, rng, propose, accept_bound=lambda z: (1.0 + z) * psi_one
            )
        nodes = np.interp(as_array(rng.uniform(size)), self.__levels_cdf, self.__nodes)
        jumps = self.__level_to_jump(nodes)
        if self.__kill_probability > 0.0:
            jumps = np.where(rng.uniform(size) < self.__kill_probability, math.inf, jumps)
        return jumps


def sample_Z(model: "IdtModel", rng: RngStream) -> float:
    """One draw from Ψ_F(z) ν_L(dz) / Ψ_H(1)."""
    return float(ZSampler(model).sample(1, rng)[0])
