import math

import numpy as np
import pytest

from src.errors import InvalidArgumentError, OutOfRangeError
from src.numerics import (
    MonotoneFn,
    generalized_inverse,
    integrate_adaptive,
    inverse_on_array,
)
from src.type_definitions import Direction


class TestIntegrateAdaptive:
    def test_finite_range(self):
        result = integrate_adaptive(lambda x: x * x, 0.0, 1.0)
        np.testing.assert_allclose(result.value, 1.0 / 3.0, rtol=1e-12)
        assert result.abs_error_estimate >= 0.0
        assert result.evaluations >= 1

    def test_semi_infinite_range(self):
        result = integrate_adaptive(lambda x: math.exp(-x), 0.0, math.inf)
        np.testing.assert_allclose(result.value, 1.0, rtol=1e-10)

    def test_breakpoints_on_semi_infinite_range(self):
        step = lambda x: 1.0 if x < 2.0 else math.exp(2.0 - x)
        result = integrate_adaptive(step, 0.0, math.inf, points=[2.0])
        np.testing.assert_allclose(result.value, 3.0, rtol=1e-10)

    def test_empty_range(self):
        result = integrate_adaptive(lambda x: 1.0, 1.5, 1.5)
        assert result.value == 0.0

    @pytest.mark.parametrize("rel_tol", [0.0, -1e-8, 0.5])
    def test_invalid_tolerance(self, rel_tol):
        with pytest.raises(InvalidArgumentError):
            integrate_adaptive(lambda x: x, 0.0, 1.0, rel_tol=rel_tol)

    def test_invalid_range(self):
        with pytest.raises(InvalidArgumentError):
            integrate_adaptive(lambda x: x, 1.0, 0.0)


class TestGeneralizedInverse:
    def test_increasing_by_bisection(self):
        square = MonotoneFn(Direction.INCREASING, lambda x: x * x)
        np.testing.assert_allclose(generalized_inverse(square, 4.0), 2.0, atol=1e-10)

    def test_decreasing_by_bisection(self):
        decay = MonotoneFn(Direction.DECREASING, lambda x: math.exp(-x))
        np.testing.assert_allclose(
            generalized_inverse(decay, math.exp(-2.0)), 2.0, atol=1e-10
        )

    def test_left_continuous_at_a_jump(self):
        step = MonotoneFn(Direction.INCREASING, lambda x: 1.0 if x >= 1.0 else 0.0)
        np.testing.assert_allclose(generalized_inverse(step, 0.5), 1.0, atol=1e-10)

    def test_level_reached_at_left_end(self):
        step = MonotoneFn(Direction.INCREASING, lambda x: 1.0 if x >= 1.0 else 0.0)
        assert generalized_inverse(step, 0.0) == 0.0

    def test_unreached_level_on_bounded_domain(self):
        ramp = MonotoneFn(Direction.INCREASING, lambda x: 0.5 * x, lo=0.0, hi=1.0)
        assert generalized_inverse(ramp, 0.5) == 1.0

    def test_closed_inverse_is_used(self):
        calls: list[float] = []

        def inverse(y: float) -> float:
            calls.append(y)
            return y**0.5

        square = MonotoneFn(Direction.INCREASING, lambda x: x * x, inverse=inverse)
        assert generalized_inverse(square, 9.0) == 3.0
        assert calls == [9.0]

    def test_out_of_range(self):
        ramp = MonotoneFn(Direction.INCREASING, lambda x: min(x, 1.0))
        with pytest.raises(OutOfRangeError):
            generalized_inverse(ramp, 1.5)
        with pytest.raises(OutOfRangeError):
            generalized_inverse(ramp, -0.5)

    def test_inverse_on_array_keeps_shape(self):
        identity = MonotoneFn(
            Direction.INCREASING, lambda x: x, lo=0.0, hi=1.0, inverse=lambda y: y
        )
        levels = np.array([[0.1, 0.2], [0.3, 0.4]])
        np.testing.assert_allclose(inverse_on_array(identity, levels), levels)


class TestMonotoneFn:
    def test_check_monotone_rejects_wrong_direction(self):
        decay = MonotoneFn(Direction.INCREASING, lambda x: math.exp(-x))
        with pytest.raises(InvalidArgumentError):
            decay.check_monotone(np.linspace(0.0, 3.0, 10))

    def test_range_closure(self):
        decay = MonotoneFn(Direction.DECREASING, lambda x: math.exp(-x))
        assert decay.range_closure() == (0.0, 1.0)
