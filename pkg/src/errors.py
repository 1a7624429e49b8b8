"""Exception hierarchy shared by every subpackage."""

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .type_definitions import IntegrationResult


class IdtError(Exception):
    """Base class of all library errors."""


class NonConvergenceError(IdtError):
    """
    Raised when a quadrature or series fails to reach its tolerance.

    Attributes:
        partial (Optional[IntegrationResult]): The best result obtained before giving up.
    """

    def __init__(
        self, message: str, partial: Optional["IntegrationResult"] = None
    ) -> None:
        super().__init__(message)
        self.partial = partial


class OutOfRangeError(IdtError, ValueError):
    """A generalized inverse was asked for a level outside the closure of the range."""


class NotInFhatError(IdtError):
    """The distribution has a positive left end point, so no Stieltjes measure exists."""


class InconclusiveError(IdtError):
    """Admissibility could be neither certified nor refuted."""


class NotAdmissibleError(IdtError):
    """The pair (F, L) does not define a finite Laplace exponent."""


class UnboundedSupportError(IdtError):
    """The operation requires u_F < ∞."""


class NotCompoundPoissonError(IdtError):
    """The operation requires a Lévy measure of finite total mass."""


class ZSamplerUnavailableError(IdtError):
    """No sampling strategy applies to the tilted mark law Ψ_F(z) ν_L(dz) / Ψ_H(1)."""


class MSamplerUnavailableError(IdtError):
    """No exact sampler is registered for the size-biased law x dF^z(x) / Ψ_F(z)."""


class InverseUnavailableError(IdtError):
    """The series sampler needs a closed-form generalized inverse."""


class UnknownFamilyError(IdtError, KeyError):
    """Catalog lookup miss."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class AllInfiniteError(IdtError):
    """Every sample is infinite, so the empirical Laplace transform vanishes."""


class InvalidArgumentError(IdtError, ValueError):
    """An argument violates a documented precondition."""
