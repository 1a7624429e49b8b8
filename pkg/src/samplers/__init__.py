from .direct import (
    DirectPathSampler,
    sample_H_direct,
    sample_levy_path_cp,
    sample_levy_values_cp,
)
from .lepage import LePagePathSampler, sample_H_lepage
from .path import PathSample, levy_weight
from .path_sampler import PathSampler
from .sampler_factory import PathSamplerFactory
from .tilted import ZSampler, sample_Z

__all__ = [
    "DirectPathSampler",
    "LePagePathSampler",
    "PathSample",
    "PathSampler",
    "PathSamplerFactory",
    "ZSampler",
    "levy_weight",
    "sample_H_direct",
    "sample_H_lepage",
    "sample_Z",
    "sample_levy_path_cp",
    "sample_levy_values_cp",
]
