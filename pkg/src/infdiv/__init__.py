from .bondesson import BondessonSeriesSampler, sample_bondesson, sample_bondesson_batch
from .compound_poisson import (
    CompoundPoissonSeriesSampler,
    cp_from_stieltjes,
    sample_cp_from_G,
    sample_cp_from_G_batch,
)
from .duality import DualitySeriesSampler, sample_id_duality, sample_id_duality_batch
from .lepage import LePageSeriesSampler, sample_id_lepage, sample_id_lepage_batch
from .sampler_factory import SeriesSamplerFactory
from .series_sampler import PoissonLevelSeries, SeriesSampler

__all__ = [
    "BondessonSeriesSampler",
    "CompoundPoissonSeriesSampler",
    "DualitySeriesSampler",
    "LePageSeriesSampler",
    "PoissonLevelSeries",
    "SeriesSampler",
    "SeriesSamplerFactory",
    "cp_from_stieltjes",
    "sample_bondesson",
    "sample_bondesson_batch",
    "sample_cp_from_G",
    "sample_cp_from_G_batch",
    "sample_id_duality",
    "sample_id_duality_batch",
    "sample_id_lepage",
    "sample_id_lepage_batch",
]
