from .bernstein import (
    BernsteinFunction,
    distribution_from_levy,
    distribution_from_stieltjes,
    levy_from_distribution,
    psi_from_distribution,
    stieltjes_from_distribution,
)
from .distribution import DistributionF
from .measures import LevyMeasure, StieltjesMeasure

__all__ = [
    "BernsteinFunction",
    "DistributionF",
    "LevyMeasure",
    "StieltjesMeasure",
    "distribution_from_levy",
    "distribution_from_stieltjes",
    "levy_from_distribution",
    "psi_from_distribution",
    "stieltjes_from_distribution",
]
