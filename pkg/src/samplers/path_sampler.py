from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Optional

import numpy as np

from src.errors import InvalidArgumentError
from src.logger import ColoredLogger
from src.rng import RngStream

from .path import PathSample

if TYPE_CHECKING:
    from src.idt import IdtModel


class PathSampler(ABC):
    default_tol: float = 1e-6

    def __init__(
        self,
        model: "IdtModel",
        horizon: float,
        tol: Optional[float],
        logger: ColoredLogger,
    ) -> None:
        """
        Initializes a new instance of the PathSampler class, which serves as an
        abstract base class for the constructions of H on [0, horizon]. This class
        holds what the direct and the series construction share.

        Args:
            model (IdtModel): The model whose paths are sampled.
            horizon (float): Paths are produced on [0, horizon].
            tol (Optional[float]): Truncation tolerance, None for the sampler default.
            logger (ColoredLogger): The logger instance used for recording sampler
                progress and truncation messages.

        Attributes:
            model (IdtModel): The model.
            horizon (float): Right end of the simulated window.
            tol (float): Truncation tolerance in effect.
            logger (ColoredLogger): The logger instance used for logging.

        Raises:
            InvalidArgumentError: If the horizon or the tolerance is not positive.
        """
        if not horizon >= 0.0 or not np.isfinite(horizon):
            raise InvalidArgumentError(f"horizon must be finite and ≥ 0, got {horizon}.")
        resolved: float = self.default_tol if tol is None else float(tol)
        if not resolved > 0.0:
            raise InvalidArgumentError(f"tol must be positive, got {tol}.")
        self.model: "IdtModel" = model
        self.horizon: float = float(horizon)
        self.tol: float = resolved
        self.logger: ColoredLogger = logger

    @abstractmethod
    def sample(self, rng: RngStream) -> PathSample:
        """
        Simulate one path on [0, horizon].

        This method should be implemented in subclasses to define the specific
        construction. Identical streams must give identical paths.

        Raises:
            NotImplementedError: Subclasses must implement this method.
        """
        raise NotImplementedError("sample must be implemented.")

    @abstractmethod
    def sample_values(self, n: int, rng: RngStream, t: Optional[float] = None) -> np.ndarray:
        """
        Simulate H_t for n independent paths, t defaulting to the horizon.

        Raises:
            NotImplementedError: Subclasses must implement this method.
        """
        raise NotImplementedError("sample_values must be implemented.")

    def _resolve_time(self, t: Optional[float]) -> float:
        value: float = self.horizon if t is None else float(t)
        if not 0.0 <= value <= self.horizon:
            raise InvalidArgumentError(f"t must lie in [0, {self.horizon}], got {t}.")
        return value
