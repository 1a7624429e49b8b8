import math

import numpy as np
import pytest
from scipy.integrate import quad

from src.core.subordinators import compound_poisson_exponential, stable
from src.errors import InvalidArgumentError, NotCompoundPoissonError
from src.families import lookup
from src.families.distributions import german_linear
from src.idt import IdtModel, check_admissible, psi_H
from src.logger import ColoredLogger
from src.rng import RngStream
from src.samplers import (
    DirectPathSampler,
    LePagePathSampler,
    PathSamplerFactory,
    ZSampler,
    sample_H_direct,
    sample_H_lepage,
    sample_levy_path_cp,
    sample_levy_values_cp,
)
from src.type_definitions import PathSamplerArgs, SamplerKind
from src.verify import empirical_bernstein, ks_two_sample

logger = ColoredLogger(name=__name__)


def within_band(samples: np.ndarray, x: float, expected: float, sigmas: float = 4.0) -> bool:
    estimate, std_error = empirical_bernstein(samples, [x])[0]
    return abs(estimate - expected) <= sigmas * std_error


class TestRngStream:
    def test_reproducible(self):
        np.testing.assert_array_equal(RngStream(7).uniform(5), RngStream(7).uniform(5))

    def test_substreams_differ(self):
        root = RngStream(7)
        assert not np.array_equal(root.substream(0).uniform(5), root.substream(1).uniform(5))
        assert root.substream(3).stream_index == 3
        assert root.substream(3).substream(1).stream_path == (3, 1)

    def test_open_interval(self, rng):
        draws = rng.uniform(100_000)
        assert draws.min() > 0.0
        assert draws.max() < 1.0
        assert isinstance(rng.uniform(), float)


class TestLevyPaths:
    def test_levy_values_laplace(self, rng):
        L = compound_poisson_exponential(1.0, 1.0)
        values = sample_levy_values_cp(L, 1.0, 20_000, rng)
        assert within_band(values, 1.0, 0.5)

    def test_levy_path_is_exact(self, rng):
        path = sample_levy_path_cp(compound_poisson_exponential(2.0, 1.0), 3.0, rng)
        assert path.exact
        assert np.all(np.diff(path.jump_times) >= 0.0)
        np.testing.assert_allclose(path(3.0), path.driving_sum(3.0))

    def test_levy_path_needs_finite_mass(self, rng):
        with pytest.raises(NotCompoundPoissonError):
            sample_levy_path_cp(stable(0.5), 1.0, rng)


class TestZSampler:
    def test_point_mass(self, frechet_model, rng):
        sampler = ZSampler(frechet_model)
        assert sampler.strategy == "point-mass"
        np.testing.assert_array_equal(sampler.sample(10, rng), np.ones(10))

    def test_bounded_rejection_mean(self, german_linear_model, rng):
        sampler = ZSampler(german_linear_model)
        assert sampler.strategy == "bounded-rejection"
        draws = sampler.sample(20_000, rng)
        # Z has density Ψ_F(z) e^{-z} / Ψ_H(1) with Ψ_F(z) = z / (z + 1).
        psi_one = float(psi_H(german_linear_model, 1.0))
        expected, _ = quad(lambda z: z * z / (z + 1.0) * math.exp(-z), 0.0, math.inf)
        band = 4.0 * draws.std(ddof=1) / math.sqrt(draws.size)
        assert abs(draws.mean() - expected / psi_one) <= band

    def test_table_for_infinite_activity(self, rng):
        model = IdtModel(pair=check_admissible(german_linear(), stable(0.5)))
        sampler = ZSampler(model)
        assert sampler.strategy == "table"
        draws = sampler.sample(1000, rng)
        assert np.all(draws > 0.0)
        assert np.all(np.isfinite(draws))


class TestDirectPathSampler:
    def test_levy_bernoulli_path_is_levy_path(self, rng):
        model = lookup("levy-bernoulli").model(normalized=False)
        path = sample_H_direct(model, 2.0, rng)
        grid = np.linspace(0.0, 2.0, 41)
        np.testing.assert_allclose(path(grid), [path.driving_sum(t) for t in grid], rtol=1e-12)

    def test_path_shape(self, german_linear_model, rng):
        path = sample_H_direct(german_linear_model, 1.0, rng)
        values = path(path.epochs(grid=20))
        assert values[0] == 0.0
        assert np.all(np.diff(values) >= -1e-12)
        assert path.exact
        assert path.truncation_error_bound == 0.0

    def test_path_outside_window(self, german_linear_model, rng):
        path = sample_H_direct(german_linear_model, 1.0, rng)
        with pytest.raises(InvalidArgumentError):
            path(1.5)

    def test_laplace_transform(self, german_linear_model, rng):
        sampler = DirectPathSampler(german_linear_model, horizon=1.0, tol=None, logger=logger)
        values = sampler.sample_values(20_000, rng)
        assert within_band(values, 1.0, float(psi_H(german_linear_model, 1.0)))

    def test_values_at_intermediate_time(self, german_linear_model, rng):
        sampler = DirectPathSampler(german_linear_model, horizon=2.0, tol=None, logger=logger)
        values = sampler.sample_values(20_000, rng, t=0.5)
        # H_t has Bernstein function t Ψ_H.
        assert within_band(values, 2.0, 0.5 * float(psi_H(german_linear_model, 2.0)))

    def test_truncated_for_unbounded_support(self, frechet_model, rng):
        sampler = DirectPathSampler(frechet_model, horizon=1.0, tol=1e-3, logger=logger)
        _, exact, bound = sampler.window
        assert not exact
        assert 0.0 < bound <= 1e-3

    def test_reproducible(self, german_linear_model):
        first = sample_H_direct(german_linear_model, 1.0, RngStream(3))
        second = sample_H_direct(german_linear_model, 1.0, RngStream(3))
        np.testing.assert_array_equal(first.jump_times, second.jump_times)
        np.testing.assert_array_equal(first.jump_values, second.jump_values)


class TestLePagePathSampler:
    def test_laplace_transform(self, frechet_model, rng):
        sampler = LePagePathSampler(frechet_model, horizon=1.0, tol=1e-3, logger=logger)
        _, exact, bound = sampler.level
        assert not exact
        assert bound <= 1e-3
        values = sampler.sample_values(20_000, rng)
        assert within_band(values, 1.0, 1.0)

    def test_agrees_with_direct(self, german_linear_model, rng):
        direct = DirectPathSampler(german_linear_model, horizon=1.0, tol=None, logger=logger)
        lepage = LePagePathSampler(german_linear_model, horizon=1.0, tol=None, logger=logger)
        _, p_value = ks_two_sample(
            direct.sample_values(5000, rng.substream(0)),
            lepage.sample_values(5000, rng.substream(1)),
        )
        assert p_value > 1e-3

    def test_path_shape(self, frechet_model, rng):
        path = sample_H_lepage(frechet_model, 1.0, rng, tol=1e-3)
        grid = np.linspace(0.0, 1.0, 21)
        values = path(grid)
        assert values[0] == 0.0
        assert np.all(np.diff(values) >= -1e-12)


class TestPathSamplerFactory:
    def test_creates_each_kind(self, german_linear_model):
        args = PathSamplerArgs(model=german_linear_model, horizon=1.0, tol=None, logger=logger)
        assert isinstance(PathSamplerFactory.create_sampler(SamplerKind.DIRECT, args), DirectPathSampler)
        assert isinstance(PathSamplerFactory.create_sampler(SamplerKind.LEPAGE, args), LePagePathSampler)

    def test_direct_needs_compound_poisson(self):
        model = IdtModel(pair=check_admissible(german_linear(), stable(0.5)))
        args = PathSamplerArgs(model=model, horizon=1.0, tol=None, logger=logger)
        with pytest.raises(NotCompoundPoissonError):
            PathSamplerFactory.create_sampler(SamplerKind.DIRECT, args)

    @pytest.mark.parametrize("horizon,tol", [(-1.0, None), (math.inf, None), (1.0, 0.0)])
    def test_invalid_arguments(self, german_linear_model, horizon, tol):
        args = PathSamplerArgs(model=german_linear_model, horizon=horizon, tol=tol, logger=logger)
        with pytest.raises(InvalidArgumentError):
            PathSamplerFactory.create_sampler(SamplerKind.DIRECT, args)
