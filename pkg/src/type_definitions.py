import sys
from typing import TYPE_CHECKING, Any, Callable, NamedTuple, Optional

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # Python 3.10 compatibility: same str()/format() behavior as enum.StrEnum
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)

        def __format__(self, format_spec: str) -> str:
            return str(self.value).__format__(format_spec)

from .logger import ColoredLogger

if TYPE_CHECKING:
    from .core.measures import LevyMeasure, StieltjesMeasure
    from .idt.model import IdtModel


class Direction(StrEnum):
    """
    Enum representing the monotonicity of a MonotoneFn.
    """

    INCREASING = "increasing"
    DECREASING = "decreasing"


class AdmissibilityRule(StrEnum):
    """
    Enum representing the rule that decided admissibility of a pair (F, L).
    """

    CP_FINITE_JUMP_MEAN = "cp-finite-jump-mean"
    BOUNDED_FINITE_DERIVATIVE = "bounded-psi-finite-derivative"
    QUADRATURE = "quadrature"
    DIVERGENT_LOWER_SUMS = "divergent-lower-sums"
    KILLED_UNBOUNDED = "killing-with-unbounded-support"
    DUALITY = "duality"


class SamplerKind(StrEnum):
    """
    Enum representing path sampling strategies.
    Currently, supports 'direct' (compound Poisson L only) and 'lepage'.
    """

    DIRECT = "direct"
    LEPAGE = "lepage"


class InfDivLaw(StrEnum):
    """
    Enum representing series representations of infinitely divisible laws.
    """

    DUALITY = "duality"
    LEPAGE = "lepage"
    BONDESSON = "bondesson"
    CP = "cp"


class SuiteKind(StrEnum):
    """
    Enum representing verification suites.
    'quick' runs the deterministic checks and a reduced Bernstein curve,
    'full' adds every Monte-Carlo check that applies to the model.
    """

    FULL = "full"
    QUICK = "quick"


class IntegrationResult(NamedTuple):
    """
    NamedTuple representing the outcome of an adaptive quadrature.

    Attributes:
        value (float): The integral estimate.
        abs_error_estimate (float): Absolute error estimate, never negative.
        evaluations (int): Number of integrand evaluations, at least one.
    """

    value: float
    abs_error_estimate: float
    evaluations: int


class SeriesSample(NamedTuple):
    """
    NamedTuple representing one draw of a series representation.

    Attributes:
        value (float): The draw, possibly `inf` when the law has killing.
        terms_used (int): Number of non-vanishing series terms that were summed.
        exact (bool): Whether the series was summed without truncation.
        truncation_error_bound (float): Bound on the truncation error, 0 when exact.
    """

    value: float
    terms_used: int
    exact: bool
    truncation_error_bound: float


class CheckResult(NamedTuple):
    """
    NamedTuple representing one verification check.

    Attributes:
        name (str): Check identifier.
        statistic (float): Observed statistic.
        threshold (float): Pass threshold for the statistic.
        passed (bool): Whether the check passed.
        n (int): Sample size, 0 for deterministic checks.
        seed (int): Master seed of the random stream used.
        oracle (str): Where the expected value comes from ("closed-form", "quadrature", "cross-sampler").
        stochastic (bool): Whether the check is Monte-Carlo based.
    """

    name: str
    statistic: float
    threshold: float
    passed: bool
    n: int
    seed: int
    oracle: str
    stochastic: bool


class PathSamplerArgs(NamedTuple):
    """
    NamedTuple representing path sampler arguments.

    Attributes:
        model (IdtModel): The model whose paths are sampled.
        horizon (float): Paths are produced on [0, horizon].
        tol (Optional[float]): Truncation tolerance, None for the sampler default.
        logger (ColoredLogger): The logger to be used for logging.
    """

    model: "IdtModel"
    horizon: float
    tol: Optional[float]
    logger: ColoredLogger


class SeriesSamplerArgs(NamedTuple):
    """
    NamedTuple representing series sampler arguments.

    Only the fields relevant to the chosen law need to be set.

    Attributes:
        levy (Optional[LevyMeasure]): Driving Lévy measure (duality, lepage).
        stieltjes (Optional[StieltjesMeasure]): Driving Stieltjes measure (bondesson).
        beta (Optional[float]): Intensity of the compound Poisson law (cp).
        G_inverse (Optional[Callable]): Generalized inverse of the cdf G (cp).
        tol (Optional[float]): Truncation tolerance, None for the sampler default.
        logger (ColoredLogger): The logger to be used for logging.
    """

    levy: Optional["LevyMeasure"] = None
    stieltjes: Optional["StieltjesMeasure"] = None
    beta: Optional[float] = None
    G_inverse: Optional[Callable[[Any], Any]] = None
    tol: Optional[float] = None
    logger: Optional[ColoredLogger] = None


class RunConfig(NamedTuple):
    """
    NamedTuple representing a sampling run requested from the command line.

    Attributes:
        family_id (str): Catalog identifier.
        params (dict[str, float]): Family parameters.
        dim (int): Dimension d of copula draws.
        n (int): Number of replicates.
        seed (int): Master seed.
        horizon (float): Path horizon.
        tol (Optional[float]): Truncation tolerance override.
        chunk_size (int): Replicates per substream.
        workers (int): Worker threads.
    """

    family_id: str
    params: dict[str, float]
    dim: int = 2
    n: int = 1
    seed: int = 0
    horizon: float = 1.0
    tol: Optional[float] = None
    chunk_size: int = 1000
    workers: int = 1


class VerifyConfig(NamedTuple):
    """
    NamedTuple representing a verification suite configuration.

    Attributes:
        suite (SuiteKind): Which checks to run.
        n (int): Monte-Carlo sample size of the sampling checks.
        seed (int): Master seed; check i draws from substream (i,).
        dim (int): Dimension used by the copula checks.
        xs (tuple[float, ...]): Abscissae of the Bernstein curve.
        max_consistency_dim (int): Largest d of the ℓ(1,…,1) = Ψ_H(d) check.
    """

    suite: SuiteKind = SuiteKind.QUICK
    n: int = 10_000
    seed: int = 1
    dim: int = 2
    xs: tuple[float, ...] = tuple(float(x) for x in range(1, 21))
    max_consistency_dim: int = 8


class CurvePoint(NamedTuple):
    """
    NamedTuple representing one abscissa of an empirical Bernstein curve.

    Attributes:
        x (float): The abscissa.
        theoretical (float): Ψ(x) from the model.
        empirical (float): Ψ̂(x) from the samples.
        std_error (float): Delta-method standard error of Ψ̂(x).
    """

    x: float
    theoretical: float
    empirical: float
    std_error: float
