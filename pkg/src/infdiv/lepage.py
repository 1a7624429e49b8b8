from typing import Optional

import numpy as np

from src.core import BernsteinFunction, LevyMeasure
from src.families.distributions import levy_bernoulli
from src.idt import IdtModel, check_admissible
from src.logger import ColoredLogger
from src.rng import RngStream
from src.samplers import LePagePathSampler
from src.type_definitions import SeriesSample

from .series_sampler import SeriesSampler


class LePageSeriesSampler(SeriesSampler):
    """
    X = Σ_k Z_k 1{τ_k (1 - e^{-Z_k}) ≤ Ψ(1)}, Z_k iid from (1 - e^{-z}) ν(dz) / Ψ(1).

    This is H₁ of the pair (Lévy-Bernoulli F, ν), for which H is the Lévy
    subordinator of ν itself, so the path LePage sampler does the work and
    its truncation rule applies.
    """

    default_tol: float = 1e-4

    def __init__(
        self,
        levy: LevyMeasure,
        tol: Optional[float],
        logger: ColoredLogger,
    ) -> None:
        """
        Initializes a new instance of the LePageSeriesSampler class.

        Args:
            levy (LevyMeasure): The Lévy measure of the law.
            tol (Optional[float]): Expected truncation error for infinite series.
            logger (ColoredLogger): The logger instance.

        Raises:
            ZSamplerUnavailableError: If the tilted law of Z cannot be sampled.
        """
        super().__init__(tol=tol, logger=logger)
        L = BernsteinFunction(levy=levy, name=f"Ψ[{levy.name}]")
        self.model: IdtModel = IdtModel(
            pair=check_admissible(levy_bernoulli(), L),
            family_id=f"lepage[{levy.name}]",
        )
        self.path_sampler = LePagePathSampler(
            model=self.model, horizon=1.0, tol=self.tol, logger=logger
        )

    def sample(self, rng: RngStream) -> SeriesSample:
        path = self.path_sampler.sample(rng)
        return SeriesSample(
            value=float(path(1.0)),
            terms_used=int(np.count_nonzero(path.jump_times <= 1.0)),
            exact=path.exact,
            truncation_error_bound=path.truncation_error_bound,
        )

    def sample_batch(self, n: int, rng: RngStream) -> np.ndarray:
        return self.path_sampler.sample_values(n, rng)


def sample_id_lepage(
    nu: LevyMeasure, rng: RngStream, tol: Optional[float] = None
) -> SeriesSample:
    """One draw of the law with Lévy measure ν by the LePage series."""
    sampler = LePageSeriesSampler(levy=nu, tol=tol, logger=ColoredLogger(name=__name__))
    return sampler.sample(rng)


def sample_id_lepage_batch(
    nu: LevyMeasure, n: int, rng: RngStream, tol: Optional[float] = None
) -> np.ndarray:
    sampler = LePageSeriesSampler(levy=nu, tol=tol, logger=ColoredLogger(name=__name__))
    return sampler.sample_batch(n, rng)
