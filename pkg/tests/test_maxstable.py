import math

import numpy as np
import pytest

from src.errors import InvalidArgumentError
from src.families import lookup
from src.idt import ell
from src.maxstable import (
    expected_stopping,
    sample_copula,
    sample_copula_batch,
    sample_copula_with_stopping,
    sample_M,
    sample_minstable_batch,
    sample_Q,
    sample_Q_batch,
)
from src.rng import RngStream
from src.verify import exp_rate_test, ks_uniform


class TestPickands:
    def test_rows_on_simplex(self, frechet_model, rng):
        q = sample_Q_batch(frechet_model, 3, 1000, rng)
        assert q.shape == (1000, 3)
        assert np.all(q >= 0.0)
        np.testing.assert_allclose(q.sum(axis=1), 1.0, rtol=1e-12)

    def test_single_draw_needs_two_dimensions(self, frechet_model, rng):
        with pytest.raises(InvalidArgumentError):
            sample_Q(frechet_model, 1, rng)

    @pytest.mark.parametrize("family_id", ["frechet", "german-linear"])
    def test_exchangeable_means(self, family_id, rng):
        model = lookup(family_id).model()
        q = sample_Q_batch(model, 3, 20_000, rng)
        band = 4.0 * q.std(axis=0, ddof=1) / math.sqrt(q.shape[0])
        assert np.all(np.abs(q.mean(axis=0) - 1.0 / 3.0) <= band)

    def test_pickands_identity(self, rng):
        model = lookup("german-linear").model()
        t = np.array([1.0, 0.5, 2.0])
        q = sample_Q_batch(model, 3, 20_000, rng)
        values = 3.0 * np.max(q * t, axis=1)
        band = 4.0 * values.std(ddof=1) / math.sqrt(values.size)
        assert abs(values.mean() - ell(model, t)) <= band

    def test_sample_M(self, rng):
        F = lookup("german-linear").F
        assert 0.0 < sample_M(F, 2.0, rng) <= 1.0
        with pytest.raises(InvalidArgumentError):
            sample_M(F, 0.0, rng)


class TestCopula:
    def test_values_inside_unit_cube(self, frechet_model, rng):
        u = sample_copula_batch(frechet_model, 4, 500, rng)
        assert u.shape == (500, 4)
        assert np.all((u > 0.0) & (u < 1.0))

    def test_uniform_margins(self, frechet_model, rng):
        u = sample_copula_batch(frechet_model, 2, 5000, rng)
        for k in range(2):
            _, p_value = ks_uniform(u[:, k])
            assert p_value > 1e-3

    def test_joint_cdf(self, rng):
        model = lookup("german-exp").model()
        u = sample_copula_batch(model, 2, 20_000, rng)
        point = np.array([0.4, 0.7])
        expected = math.exp(-ell(model, -np.log(point)))
        observed = np.mean(np.all(u <= point, axis=1))
        assert abs(observed - expected) <= 4.0 * math.sqrt(expected * (1.0 - expected) / u.shape[0])

    def test_dimension_below_two(self, frechet_model, rng):
        with pytest.raises(InvalidArgumentError):
            sample_copula(frechet_model, 1, rng)

    def test_reproducible(self, frechet_model):
        first = sample_copula_batch(frechet_model, 3, 50, RngStream(11))
        second = sample_copula_batch(frechet_model, 3, 50, RngStream(11))
        np.testing.assert_array_equal(first, second)

    def test_stopping_index(self, frechet_model, rng):
        u, steps = sample_copula_with_stopping(frechet_model, 3, rng)
        assert u.shape == (3,)
        assert isinstance(steps, int)
        assert steps >= 1


class TestExpectedStopping:
    def test_one_dimension(self, frechet_model):
        np.testing.assert_allclose(expected_stopping(frechet_model, 1), 1.0, rtol=1e-9)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_bounded_by_square(self, frechet_model, d):
        assert 1.0 <= expected_stopping(frechet_model, d) <= d * d

    def test_frechet_two_dimensions(self, frechet_model):
        # 2 (2 / Ψ_H(1) - 1 / Ψ_H(2)) with Ψ_H(x) = √x.
        np.testing.assert_allclose(
            expected_stopping(frechet_model, 2), 2.0 * (2.0 - 1.0 / math.sqrt(2.0)), rtol=1e-9
        )

    def test_needs_normalized_model(self, german_linear_model):
        with pytest.raises(InvalidArgumentError):
            expected_stopping(german_linear_model, 2)


class TestMinStable:
    def test_exponential_margins(self, frechet_model, rng):
        y = sample_minstable_batch(frechet_model, 2, 10_000, rng)
        _, passed = exp_rate_test(y[:, 0], 1.0, threshold=4.0)
        assert passed

    def test_weighted_minimum(self, frechet_model, rng):
        # ℓ(1, 2) = (1 + 2²)^{1/2} for θ = 1/2.
        t = np.array([1.0, 2.0])
        y = sample_minstable_batch(frechet_model, 2, 10_000, rng)
        _, passed = exp_rate_test(np.min(y / t, axis=1), math.sqrt(5.0), threshold=4.0)
        assert passed
