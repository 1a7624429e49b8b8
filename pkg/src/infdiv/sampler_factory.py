from src.errors import InvalidArgumentError
from src.logger import ColoredLogger
from src.type_definitions import InfDivLaw, SeriesSamplerArgs

from .bondesson import BondessonSeriesSampler
from .compound_poisson import CompoundPoissonSeriesSampler
from .duality import DualitySeriesSampler
from .lepage import LePageSeriesSampler
from .series_sampler import SeriesSampler


def _require(value, field: str, law: InfDivLaw):
    if value is None:
        raise InvalidArgumentError(f"The {law} series needs `{field}`.")
    return value


class SeriesSamplerFactory:
    @staticmethod
    def create_sampler(law: InfDivLaw, sampler_args: SeriesSamplerArgs) -> SeriesSampler:
        """
        Create a series sampler based on the given law and arguments.

        Args:
            law (InfDivLaw): The series representation to use.
            sampler_args (SeriesSamplerArgs): The arguments for the sampler.

        Returns:
            SeriesSampler: The created sampler instance.

        Raises:
            NotImplementedError: If the series representation is not implemented.
            InvalidArgumentError: If a field the representation needs is missing.
        """
        logger: ColoredLogger = sampler_args.logger or ColoredLogger(name=__name__)
        if law == InfDivLaw.DUALITY:
            return DualitySeriesSampler(
                levy=_require(sampler_args.levy, "levy", law),
                tol=sampler_args.tol,
                logger=logger,
            )
        if law == InfDivLaw.LEPAGE:
            return LePageSeriesSampler(
                levy=_require(sampler_args.levy, "levy", law),
                tol=sampler_args.tol,
                logger=logger,
            )
        if law == InfDivLaw.BONDESSON:
            return BondessonSeriesSampler(
                stieltjes=_require(sampler_args.stieltjes, "stieltjes", law),
                tol=sampler_args.tol,
                logger=logger,
            )
        if law == InfDivLaw.CP:
            return CompoundPoissonSeriesSampler(
                beta=_require(sampler_args.beta, "beta", law),
                G_inverse=_require(sampler_args.G_inverse, "G_inverse", law),
                logger=logger,
            )
        else:
            raise NotImplementedError("Series sampler not implemented.")
