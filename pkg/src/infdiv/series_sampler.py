from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from src.errors import InvalidArgumentError
from src.logger import ColoredLogger
from src.rng import RngStream
from src.type_definitions import SeriesSample


class SeriesSampler(ABC):
    default_tol: float = 1e-6

    def __init__(self, tol: Optional[float], logger: ColoredLogger) -> None:
        """
        Initializes a new instance of the SeriesSampler class, which serves as an
        abstract base class for series representations of infinitely divisible
        laws on [0, ∞]. Every series is a sum over the arrivals of a unit
        Poisson process below a level; finite levels give exact draws.

        Args:
            tol (Optional[float]): Truncation tolerance, None for the sampler default.
            logger (ColoredLogger): The logger instance used for recording
                truncation messages.

        Attributes:
            tol (float): Truncation tolerance in effect.
            logger (ColoredLogger): The logger instance used for logging.

        Raises:
            InvalidArgumentError: If the tolerance is not positive.
        """
        resolved: float = self.default_tol if tol is None else float(tol)
        if not resolved > 0.0:
            raise InvalidArgumentError(f"tol must be positive, got {tol}.")
        self.tol: float = resolved
        self.logger: ColoredLogger = logger

    @abstractmethod
    def sample(self, rng: RngStream) -> SeriesSample:
        """
        Draw one variate together with its series bookkeeping.

        Raises:
            NotImplementedError: Subclasses must implement this method.
        """
        raise NotImplementedError("sample must be implemented.")

    @abstractmethod
    def sample_batch(self, n: int, rng: RngStream) -> np.ndarray:
        """
        Draw n independent variates.

        Raises:
            NotImplementedError: Subclasses must implement this method.
        """
        raise NotImplementedError("sample_batch must be implemented.")


class PoissonLevelSeries(SeriesSampler):
    """
    Series Σ_k h(τ_k) 1{τ_k ≤ level}: the arrivals τ_k of a unit Poisson
    process below the level are a Poisson(level) number of uniform points on
    (0, level). Subclasses give the level and the term h.
    """

    compensation: float = 0.0

    @property
    @abstractmethod
    def level(self) -> tuple[float, bool, float]:
        """
        (level, exact, truncation bound).

        Raises:
            NotImplementedError: Subclasses must implement this method.
        """
        raise NotImplementedError("level must be implemented.")

    @abstractmethod
    def terms(self, arrivals: np.ndarray, rng: RngStream) -> np.ndarray:
        """
        The series terms at the given arrival times.

        Raises:
            NotImplementedError: Subclasses must implement this method.
        """
        raise NotImplementedError("terms must be implemented.")

    def sample(self, rng: RngStream) -> SeriesSample:
        level, exact, error_bound = self.level
        count: int = int(rng.poisson(level))
        arrivals = np.asarray(rng.uniform(count), dtype=float) * level
        value: float = float(np.sum(self.terms(arrivals, rng))) + self.compensation
        return SeriesSample(
            value=value,
            terms_used=count,
            exact=exact,
            truncation_error_bound=error_bound,
        )

    def sample_batch(self, n: int, rng: RngStream) -> np.ndarray:
        level, _, _ = self.level
        counts = rng.poisson(level, size=n)
        arrivals = np.asarray(rng.uniform(int(counts.sum())), dtype=float) * level
        values = np.bincount(
            np.repeat(np.arange(n), counts), weights=self.terms(arrivals, rng), minlength=n
        )
        return values + self.compensation
