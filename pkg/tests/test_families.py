import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import exp1

from src.core.subordinators import compound_poisson_exponential
from src.errors import InvalidArgumentError, UnknownFamilyError
from src.families import (
    catalog,
    closed_ell_exp_family,
    closed_ell_frechet,
    family_ids,
    family_parameters,
    lookup,
)
from src.families.closed_forms import exp_e1
from src.idt import ell, psi_H

FAMILY_IDS = [
    "levy-bernoulli",
    "standard-poisson",
    "german-linear",
    "german-exp",
    "frechet",
    "galambos",
    "molchanov-floor",
    "molchanov-exp",
    "bondesson-45",
    "bondesson-5",
    "bondesson-33",
    "bondesson-64",
]
XS = np.array([0.5, 1.0, 2.0])


class TestCatalog:
    def test_identifiers(self):
        assert family_ids() == FAMILY_IDS
        assert [spec.id for spec in catalog()] == FAMILY_IDS

    def test_parameters(self):
        assert family_parameters("frechet") == {"theta": 0.5}
        assert family_parameters("german-exp") == {}
        assert lookup("bondesson-33", theta=2.0).params == {"theta": 2.0}

    def test_unknown_family(self):
        with pytest.raises(UnknownFamilyError):
            lookup("gumbel")

    def test_unknown_parameter(self):
        with pytest.raises(InvalidArgumentError):
            lookup("frechet", alpha=0.5)

    @pytest.mark.parametrize("theta", [0.0, 1.0, math.inf])
    def test_parameter_out_of_range(self, theta):
        with pytest.raises(InvalidArgumentError):
            lookup("frechet", theta=theta)

    def test_closed_forms(self):
        assert lookup("frechet").closed_forms == frozenset(
            {"psi_F", "inverse", "M-sampler", "psi_H", "ell", "Z-sampler"}
        )
        assert "ell" not in lookup("galambos").closed_forms
        assert lookup("bondesson-45").stieltjes is not None

    def test_closed_psi_H_only_for_default_L(self):
        spec = lookup("german-linear")
        assert spec.closed_psi_H() is not None
        assert spec.closed_psi_H(compound_poisson_exponential(2.0, 1.0)) is None

    @pytest.mark.parametrize("family_id", FAMILY_IDS)
    def test_normalized_models(self, family_id):
        model = lookup(family_id).model()
        assert model.normalized
        assert abs(model.psi_h_one - 1.0) <= 1e-9

    @pytest.mark.parametrize("family_id", FAMILY_IDS)
    def test_closed_psi_H_against_quadrature(self, family_id):
        model = lookup(family_id).model(normalized=False)
        np.testing.assert_allclose(
            psi_H(model, XS), psi_H(model, XS, use_closed=False), rtol=1e-6
        )


class TestDistributions:
    @pytest.mark.parametrize(
        "family_id", ["levy-bernoulli", "german-linear", "german-exp", "galambos", "molchanov-exp"]
    )
    def test_closed_psi_against_quadrature(self, family_id):
        F = lookup(family_id).F
        np.testing.assert_allclose(F.psi(XS), F.psi_quadrature(XS), rtol=1e-7)

    @pytest.mark.parametrize(
        "family_id",
        ["levy-bernoulli", "german-linear", "german-exp", "galambos", "molchanov-floor", "molchanov-exp"],
    )
    def test_power_sampler_mean(self, family_id, rng):
        # E[X] under F^z is ∫ (1 - F^z) = Ψ_F(z).
        F = lookup(family_id).F
        draws = F.sample_power(np.full(20_000, 1.5), rng)
        band = 4.0 * draws.std(ddof=1) / math.sqrt(draws.size)
        assert abs(draws.mean() - float(F.psi(1.5))) <= band

    @pytest.mark.parametrize(
        "family_id",
        ["levy-bernoulli", "german-linear", "frechet", "galambos", "molchanov-floor", "molchanov-exp"],
    )
    def test_size_biased_sampler(self, family_id, rng):
        # E[1/M] = (1 - F(0)^z) / Ψ_F(z) under x dF^z(x) / Ψ_F(z).
        F = lookup(family_id).F
        z = 2.0
        inverse_draws = 1.0 / F.sample_size_biased(np.full(20_000, z), rng)
        expected = (1.0 - float(F(0.0)) ** z) / float(F.psi(z))
        band = max(4.0 * inverse_draws.std(ddof=1) / math.sqrt(inverse_draws.size), 1e-9)
        assert abs(inverse_draws.mean() - expected) <= band

    def test_german_exp_size_biased_mean(self, rng):
        F = lookup("german-exp").F
        z = 2.0
        draws = F.sample_size_biased(np.full(20_000, z), rng)
        moment, _ = quad(lambda x: x * x * z * math.exp(z * (x - 1.0)), 0.0, 1.0)
        expected = moment / float(F.psi(z))
        band = 4.0 * draws.std(ddof=1) / math.sqrt(draws.size)
        assert abs(draws.mean() - expected) <= band
        assert np.all((draws > 0.0) & (draws < 1.0))


class TestBondessonLaws:
    @pytest.mark.parametrize("family_id", ["bondesson-45", "bondesson-5", "bondesson-33", "bondesson-64"])
    def test_psi_against_stieltjes_integral(self, family_id):
        spec = lookup(family_id)
        model = spec.model(normalized=False)
        np.testing.assert_allclose(psi_H(model, XS), spec.stieltjes.bernstein(XS), rtol=1e-6)

    def test_family_45_value(self):
        model = lookup("bondesson-45").model(normalized=False)
        np.testing.assert_allclose(model.psi_h_one, 2.0 * math.log(2.0) - 1.0, rtol=1e-12)

    def test_family_33_at_theta(self):
        model = lookup("bondesson-33", theta=2.0).model(normalized=False)
        np.testing.assert_allclose(psi_H(model, 2.0), 1.0, rtol=1e-12)

    def test_stieltjes_inverse(self):
        rho = lookup("bondesson-64").stieltjes
        y = np.array([0.1, 0.5, 2.0])
        np.testing.assert_allclose(rho.g(rho.g_rho_inverse(y)), y, rtol=1e-12)


class TestClosedForms:
    def test_frechet_ell(self):
        np.testing.assert_allclose(closed_ell_frechet(0.5, 1.0, [1.0, 1.0]), math.sqrt(2.0))
        np.testing.assert_allclose(closed_ell_frechet(0.5, 2.0, [3.0, 0.0]), 6.0)
        assert closed_ell_frechet(0.5, 1.0, [0.0, 0.0]) == 0.0

    def test_exp_family_ell_zero_vector(self):
        assert closed_ell_exp_family(lambda x: x, [0.0, 0.0]) == 0.0

    def test_exp_family_ell_with_other_L(self, rng):
        spec = lookup("german-exp")
        model = spec.model(L=compound_poisson_exponential(1.0, 1.0), normalized=False)
        assert model.closed_psi_H is None
        for _ in range(3):
            t = 0.25 + 2.0 * rng.uniform(3)
            np.testing.assert_allclose(
                ell(model, t), ell(model, t, use_closed=False), rtol=1e-4
            )

    def test_frechet_ell_against_quadrature(self, frechet_model, rng):
        for _ in range(3):
            t = 0.25 + 2.0 * rng.uniform(3)
            np.testing.assert_allclose(
                ell(frechet_model, t), ell(frechet_model, t, use_closed=False), rtol=1e-5
            )

    def test_exp_e1(self):
        np.testing.assert_allclose(exp_e1(1.0), math.e * exp1(1.0), rtol=1e-14)
        u = 600.0
        series = (1.0 / u) * (1.0 - 1.0 / u + 2.0 / u**2 - 6.0 / u**3)
        np.testing.assert_allclose(exp_e1(u), series, rtol=1e-9)
        np.testing.assert_allclose(exp_e1(499.999), exp_e1(500.001), rtol=1e-6)
        assert math.isinf(exp_e1(0.0))
