from src.logger import ColoredLogger
from src.type_definitions import PathSamplerArgs, SamplerKind

from .direct import DirectPathSampler
from .lepage import LePagePathSampler
from .path_sampler import PathSampler


class PathSamplerFactory:
    @staticmethod
    def create_sampler(sampler_kind: SamplerKind, sampler_args: PathSamplerArgs) -> PathSampler:
        """
        Create a path sampler based on the given kind and arguments.

        Args:
            sampler_kind (SamplerKind): The construction to use.
            sampler_args (PathSamplerArgs): The arguments for the sampler.

        Returns:
            PathSampler: The created sampler instance.

        Raises:
            NotImplementedError: If the sampler kind is not implemented.
            NotCompoundPoissonError: For the direct construction with infinite ν_L.
            ZSamplerUnavailableError: For the LePage series without a Z-sampler.
        """
        logger: ColoredLogger = sampler_args.logger or ColoredLogger(name=__name__)
        if sampler_kind == SamplerKind.DIRECT:
            return DirectPathSampler(
                model=sampler_args.model,
                horizon=sampler_args.horizon,
                tol=sampler_args.tol,
                logger=logger,
            )
        if sampler_kind == SamplerKind.LEPAGE:
            return LePagePathSampler(
                model=sampler_args.model,
                horizon=sampler_args.horizon,
                tol=sampler_args.tol,
                logger=logger,
            )
        else:
            raise NotImplementedError("Path sampler not implemented.")
