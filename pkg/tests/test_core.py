import math

import numpy as np
import pytest
from scipy.integrate import quad

from src.core import (
    DistributionF,
    LevyMeasure,
    distribution_from_levy,
    distribution_from_stieltjes,
    levy_from_distribution,
    psi_from_distribution,
    stieltjes_from_distribution,
)
from src.core._arrays import as_array
from src.core.subordinators import (
    compound_poisson_exponential,
    compound_poisson_pareto,
    compound_poisson_uniform,
    killed,
    poisson,
    stable,
)
from src.errors import (
    InvalidArgumentError,
    MSamplerUnavailableError,
    NotCompoundPoissonError,
    NotInFhatError,
)
from src.families import family_ids, lookup
from src.families.bondesson import family_45
from src.families.distributions import frechet, german_linear
from src.idt import psi_H

XS = np.array([0.5, 1.0, 2.0, 5.0])


def plain_linear() -> DistributionF:
    """F(x) = min{x, 1} without any closed forms or samplers."""
    return DistributionF(
        cdf=lambda x: np.clip(as_array(x), 0.0, 1.0),
        left_support=0.0,
        right_support=1.0,
        name="plain-linear",
        breakpoints=(1.0,),
    )


def plain_exponential() -> DistributionF:
    return DistributionF(
        cdf=lambda x: np.where(as_array(x) < 0.0, 0.0, -np.expm1(-as_array(x))),
        left_support=0.0,
        right_support=math.inf,
        name="plain-exponential",
    )


class TestDistributionF:
    def test_psi_quadrature_matches_closed_form(self):
        np.testing.assert_allclose(plain_linear().psi(XS), XS / (XS + 1.0), rtol=1e-7)

    def test_frechet_psi_quadrature(self):
        F = frechet(0.5)
        np.testing.assert_allclose(F.psi_quadrature(XS), np.sqrt(XS), rtol=1e-6)

    def test_psi_limits(self):
        F = plain_linear()
        np.testing.assert_allclose(F.psi([0.0, math.inf]), [0.0, 1.0])

    def test_mean_and_derivative_at_zero(self):
        F = plain_linear()
        np.testing.assert_allclose(F.mean, 0.5, rtol=1e-8)
        np.testing.assert_allclose(F.derivative_at_zero, 1.0, rtol=1e-7)

    def test_inverse_by_bisection(self):
        levels = np.array([0.1, 0.5, 0.9, 1.0])
        np.testing.assert_allclose(plain_linear().inverse(levels), levels, atol=1e-10)

    def test_rescaled_divides_psi(self):
        F = german_linear()
        scaled = F.rescaled(4.0)
        np.testing.assert_allclose(scaled.psi(XS), F.psi(XS) / 4.0, rtol=1e-12)
        assert scaled.right_support == 0.25
        np.testing.assert_allclose(scaled(0.125), 0.5)

    def test_rescaled_rejects_bad_scale(self):
        with pytest.raises(InvalidArgumentError):
            german_linear().rescaled(0.0)

    def test_validate(self):
        assert plain_linear().validate().name == "plain-linear"

    def test_invalid_supports(self):
        with pytest.raises(InvalidArgumentError):
            DistributionF(cdf=lambda x: x, left_support=1.0, right_support=0.5)

    def test_power_sampler_by_inversion(self, rng):
        draws = plain_linear().sample_power(np.full(20_000, 2.0), rng)
        # F^2 = x^2 on [0, 1] has mean 2/3 and standard deviation (1/18)^½.
        assert abs(draws.mean() - 2.0 / 3.0) < 4.0 * math.sqrt(1.0 / 18.0 / draws.size)

    def test_size_biased_by_rejection(self, rng):
        draws = plain_linear().sample_size_biased(np.ones(20_000), rng)
        # Density 2x on (0, 1): mean 2/3, variance 1/18.
        assert abs(draws.mean() - 2.0 / 3.0) < 4.0 * math.sqrt(1.0 / 18.0 / draws.size)
        assert np.all((draws > 0.0) & (draws <= 1.0))

    def test_size_biased_unavailable_for_unbounded_support(self, rng):
        with pytest.raises(MSamplerUnavailableError):
            plain_exponential().sample_size_biased(np.ones(3), rng)


class TestLevyMeasure:
    def test_survival_conventions(self):
        nu = killed(poisson(1.0), 0.5).levy
        np.testing.assert_allclose(nu.survival_function([0.0, 0.5, 2.0, math.inf]), [1.5, 1.5, 0.5, 0.5])

    def test_survival_inverse_conventions(self):
        nu = killed(poisson(1.0), 0.5).levy
        values = nu.survival_inverse([0.25, 1.0, 1.5, 2.0])
        assert math.isinf(values[0])
        np.testing.assert_allclose(values[1:], [1.0, 0.0, 0.0])

    def test_numeric_survival_inverse(self):
        nu = LevyMeasure(survival=lambda t: np.exp(-as_array(t)), total_mass=1.0)
        np.testing.assert_allclose(
            nu.survival_inverse([0.5, 0.1]), -np.log([0.5, 0.1]), atol=1e-10
        )

    def test_jump_mean_by_quadrature(self):
        nu = LevyMeasure(survival=lambda t: 2.0 * np.exp(-as_array(t)), total_mass=2.0)
        np.testing.assert_allclose(nu.jump_mean, 2.0, rtol=1e-8)

    def test_jump_mean_with_killing_is_infinite(self):
        assert math.isinf(killed(poisson(1.0), 0.5).levy.jump_mean)

    def test_bernstein_by_quadrature(self):
        L = compound_poisson_exponential(beta=2.0, rate=1.0)
        np.testing.assert_allclose(L.levy.bernstein(XS), 2.0 * XS / (XS + 1.0), rtol=1e-7)

    def test_stable_bernstein_by_quadrature(self):
        np.testing.assert_allclose(stable(0.5).levy.bernstein([1.0, 4.0]), [1.0, 2.0], rtol=1e-6)

    def test_integrate_point_mass(self):
        nu = poisson(3.0).levy
        np.testing.assert_allclose(nu.integrate(lambda y: y + 1.0), 6.0)

    def test_integrate_with_atom_at_infinity(self):
        nu = killed(compound_poisson_exponential(1.0, 1.0), 0.25).levy
        value = nu.integrate(lambda y: 1.0 if math.isinf(y) else -math.expm1(-y))
        np.testing.assert_allclose(value, 0.25 + 0.5, rtol=1e-7)

    def test_check_integrable(self):
        nu = compound_poisson_uniform(2.0).levy
        np.testing.assert_allclose(nu.check_integrable(), 1.0, rtol=1e-8)

    def test_sample_jumps_needs_finite_mass(self, rng):
        with pytest.raises(NotCompoundPoissonError):
            stable(0.5).levy.sample_jumps(5, rng)

    def test_sample_jumps_by_inversion(self, rng):
        nu = LevyMeasure(
            survival=lambda t: np.exp(-as_array(t)),
            total_mass=1.0,
            closed_survival_inverse=lambda y: -np.log(as_array(y)),
        )
        jumps = nu.sample_jumps(20_000, rng)
        assert abs(jumps.mean() - 1.0) < 4.0 / math.sqrt(jumps.size)

    def test_rejects_invalid_masses(self):
        with pytest.raises(InvalidArgumentError):
            LevyMeasure(survival=lambda t: t, total_mass=0.0)
        with pytest.raises(InvalidArgumentError):
            LevyMeasure(survival=lambda t: t, total_mass=1.0, atom_at_infinity=2.0)


class TestSubordinators:
    def test_poisson_closed_form(self):
        L = poisson(2.0)
        np.testing.assert_allclose(L(XS), 2.0 * -np.expm1(-XS))
        assert L(math.inf) == 2.0
        assert L(0.0) == 0.0

    def test_compound_poisson_uniform_closed_form(self):
        L = compound_poisson_uniform(1.0)
        np.testing.assert_allclose(L(XS), L.levy.bernstein(XS), rtol=1e-7)

    def test_pareto_jump_mean(self):
        assert math.isinf(compound_poisson_pareto(1.0, 0.5).levy.jump_mean)
        np.testing.assert_allclose(compound_poisson_pareto(1.0, 2.0).levy.jump_mean, 2.0)

    def test_killing_adds_constant(self):
        base = compound_poisson_exponential(1.0, 1.0)
        L = killed(base, 0.5)
        np.testing.assert_allclose(L(XS), 0.5 + base(XS))
        assert L.killing

    def test_stable_rejects_theta(self):
        with pytest.raises(InvalidArgumentError):
            stable(1.0)

    @pytest.mark.parametrize("beta", [0.0, -1.0, math.inf])
    def test_poisson_rejects_intensity(self, beta):
        with pytest.raises(InvalidArgumentError):
            poisson(beta)


class TestBernsteinCorrespondence:
    def test_levy_from_linear_distribution(self):
        nu = levy_from_distribution(german_linear())
        t = np.array([0.1, 1.0, 3.0])
        np.testing.assert_allclose(nu.survival_function(t), np.exp(-t))
        assert nu.total_mass == 1.0
        assert nu.atom_at_infinity == 0.0

    def test_levy_from_frechet(self):
        F = frechet(0.5)
        nu = levy_from_distribution(F)
        c = (1.0 / math.gamma(0.5)) ** 2
        t = np.array([0.5, 1.0, 4.0])
        np.testing.assert_allclose(nu.survival_function(t), math.sqrt(c) / np.sqrt(t), rtol=1e-12)

    def test_round_trip_distribution(self):
        F = german_linear()
        back = distribution_from_levy(levy_from_distribution(F))
        grid = np.linspace(0.01, 1.5, 50)
        np.testing.assert_allclose(back(grid), F(grid), atol=1e-10)

    def test_distribution_from_point_mass(self):
        F = distribution_from_levy(poisson(1.0).levy)
        np.testing.assert_allclose(F([0.0, 0.5, 1.0, 2.0]), [math.exp(-1.0)] * 2 + [1.0, 1.0])
        np.testing.assert_allclose(F.psi_quadrature(XS), -np.expm1(-XS), rtol=1e-8)

    def test_psi_from_distribution(self):
        psi = psi_from_distribution(german_linear())
        np.testing.assert_allclose(psi(XS), XS / (XS + 1.0))
        np.testing.assert_allclose(psi.evaluate_numerically(XS), XS / (XS + 1.0), rtol=1e-7)

    def test_stieltjes_from_distribution(self):
        rho = stieltjes_from_distribution(german_linear())
        np.testing.assert_allclose(rho.g([0.5, 2.0]), np.exp([-0.5, -2.0]))
        np.testing.assert_allclose(rho.g_rho_inverse([0.5]), [-math.log(0.5)])

    def test_stieltjes_needs_zero_left_end(self):
        shifted = DistributionF(
            cdf=lambda x: np.where(as_array(x) < 0.3, 0.0, np.clip(as_array(x), 0.0, 1.0)),
            left_support=0.3,
            right_support=1.0,
        )
        with pytest.raises(NotInFhatError):
            stieltjes_from_distribution(shifted)

    def test_stieltjes_bernstein(self):
        rho = family_45().rho
        np.testing.assert_allclose(rho.bernstein(1.0), 2.0 * math.log(2.0) - 1.0, rtol=1e-6)

    def test_distribution_from_stieltjes(self):
        rho = family_45().rho
        F = distribution_from_stieltjes(rho)
        assert F.right_support == 0.5
        assert F.left_support == 0.0
        # ν_{F_ρ} is the image of ρ under u ↦ 1/u, so Ψ_{F_ρ}(1) = ∫ (1 - e^{-1/u}) ρ(du).
        expected, _ = quad(lambda u: -math.expm1(-1.0 / u) * (1.0 - u), 0.0, 1.0)
        np.testing.assert_allclose(F.psi_quadrature(1.0), expected, rtol=1e-6)


def support_grid(F: DistributionF, size: int = 1000) -> np.ndarray:
    if F.bounded:
        return np.linspace(0.0, 1.25 * F.right_support, size + 1)[1:]
    return np.geomspace(1e-3, 1e3, size)


def assert_concave_and_subadditive(psi, tol: float) -> None:
    xs = np.linspace(0.25, 10.25, 41)
    values = as_array(psi(xs))
    assert np.all(values[1:-1] >= 0.5 * (values[:-2] + values[2:]) - tol)
    ys = np.geomspace(0.01, 10.0, 15)
    base = as_array(psi(ys))
    for d in (2, 3, 5):
        assert np.all(as_array(psi(d * ys)) <= d * base + tol)


class TestCatalogCorrespondence:
    @pytest.mark.parametrize("family_id", family_ids())
    def test_levy_round_trip(self, family_id):
        F = lookup(family_id).F
        grid = support_grid(F)
        back = distribution_from_levy(levy_from_distribution(F))
        assert np.max(np.abs(back(grid) - F(grid))) <= 1e-9

    @pytest.mark.parametrize("family_id", family_ids())
    def test_stieltjes_round_trip(self, family_id):
        F = lookup(family_id).F
        assert F.left_support == 0.0
        grid = support_grid(F)
        back = distribution_from_stieltjes(stieltjes_from_distribution(F))
        assert np.max(np.abs(back(grid) - F(grid))) <= 1e-9

    @pytest.mark.parametrize("family_id", family_ids())
    def test_psi_F_shape(self, family_id):
        F = lookup(family_id).F
        tol = 1e-10 if F.closed_psi is not None else 1e-7 * float(F.psi(50.0))
        assert_concave_and_subadditive(F.psi, tol)

    @pytest.mark.parametrize("family_id", family_ids())
    def test_psi_H_shape(self, family_id):
        model = lookup(family_id).model(normalized=False)
        closed = model.closed_psi_H is not None
        tol = 1e-10 if closed else 1e-7 * float(psi_H(model, 50.0))
        assert_concave_and_subadditive(lambda x: psi_H(model, x), tol)
