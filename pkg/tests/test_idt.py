import math

import numpy as np
import pytest

from src.core import DistributionF
from src.core._arrays import as_array
from src.core.subordinators import (
    compound_poisson_exponential,
    compound_poisson_pareto,
    poisson,
    stable,
)
from src.errors import (
    InconclusiveError,
    InvalidArgumentError,
    NotAdmissibleError,
    UnboundedSupportError,
)
from src.families import lookup
from src.families.distributions import frechet, german_linear, levy_bernoulli
from src.idt import (
    IdtModel,
    check_admissible,
    dual_pair,
    ell,
    has_killing,
    increment_psi1,
    is_compound_poisson,
    normalize,
    psi_H,
)
from src.type_definitions import AdmissibilityRule

FAMILY_45_PSI_ONE = 2.0 * math.log(2.0) - 1.0


class TestCheckAdmissible:
    def test_bounded_psi_with_finite_derivative(self):
        pair = check_admissible(german_linear(), stable(0.5))
        assert pair.admissible
        assert pair.certificate == AdmissibilityRule.BOUNDED_FINITE_DERIVATIVE

    def test_compound_poisson_with_finite_jump_mean(self):
        pair = check_admissible(frechet(0.5), poisson(1.0))
        assert pair.admissible
        assert pair.certificate == AdmissibilityRule.CP_FINITE_JUMP_MEAN

    def test_divergent_lower_sums(self):
        # ν_L(dy) = y^{-1.5} 1{y > 1} dy and Ψ_F(y) = y^{0.5}.
        pair = check_admissible(frechet(0.5), compound_poisson_pareto(beta=2.0, alpha=0.5))
        assert not pair.admissible
        assert pair.certificate == AdmissibilityRule.DIVERGENT_LOWER_SUMS

    def test_slowly_decaying_lower_sums_are_not_divergent(self):
        # ∫ y^{0.5} ν_L(dy) with ν_L(dy) ∝ y^{-1.5-1e-6} is finite but its
        # dyadic blocks shrink by 2^{-1e-6} only.
        L = compound_poisson_pareto(beta=2.0, alpha=0.5 + 1e-6)
        try:
            pair = check_admissible(frechet(0.5), L)
        except InconclusiveError:
            return
        assert pair.admissible
        assert pair.certificate == AdmissibilityRule.QUADRATURE

    def test_inadmissible_pair_cannot_be_modelled(self):
        pair = check_admissible(frechet(0.5), compound_poisson_pareto(beta=2.0, alpha=0.5))
        with pytest.raises(NotAdmissibleError):
            IdtModel(pair=pair)
        with pytest.raises(NotAdmissibleError):
            dual_pair(pair)


class TestPsiH:
    def test_family_45(self):
        model = lookup("bondesson-45").model(normalized=False)
        np.testing.assert_allclose(psi_H(model, 1.0), FAMILY_45_PSI_ONE, rtol=1e-12)
        np.testing.assert_allclose(
            psi_H(model, 1.0, use_closed=False), FAMILY_45_PSI_ONE, rtol=1e-6
        )

    def test_frechet_with_poisson_is_power(self, frechet_model):
        x = np.array([0.5, 1.0, 2.0])
        np.testing.assert_allclose(psi_H(frechet_model, x, use_closed=False), np.sqrt(x), rtol=1e-8)

    def test_german_linear_closed_form_against_quadrature(self, german_linear_model):
        x = np.array([0.5, 1.0, 3.0])
        np.testing.assert_allclose(
            psi_H(german_linear_model, x),
            psi_H(german_linear_model, x, use_closed=False),
            rtol=1e-6,
        )

    def test_zero_and_negative_arguments(self, german_linear_model):
        assert float(psi_H(german_linear_model, 0.0)) == 0.0
        with pytest.raises(InvalidArgumentError):
            psi_H(german_linear_model, -1.0)

    def test_nested_quadrature_without_closed_forms(self):
        # Neither Ψ_F nor Ψ_L closed: Ψ_L(y) = y/(y+1) is dropped on purpose.
        F = DistributionF(
            cdf=lambda x: np.clip(as_array(x), 0.0, 1.0),
            left_support=0.0,
            right_support=1.0,
            breakpoints=(1.0,),
        )
        L = compound_poisson_exponential(1.0, 1.0)
        bare_L = type(L)(levy=L.levy, name="bare")
        model = IdtModel(pair=check_admissible(F, bare_L))
        reference = lookup("german-linear").model(normalized=False)
        np.testing.assert_allclose(psi_H(model, 2.0), psi_H(reference, 2.0), rtol=1e-6)


class TestEll:
    def test_frechet_two_ones(self, frechet_model):
        np.testing.assert_allclose(ell(frechet_model, [1.0, 1.0]), math.sqrt(2.0), rtol=1e-12)
        np.testing.assert_allclose(
            ell(frechet_model, [1.0, 1.0], use_closed=False), math.sqrt(2.0), rtol=1e-5
        )

    def test_exp_family_with_poisson(self, german_exp_model):
        np.testing.assert_allclose(ell(german_exp_model, [1.0, 2.0]), 0.898931, atol=1e-6)
        np.testing.assert_allclose(
            ell(german_exp_model, [1.0, 2.0], use_closed=False), 0.898931, atol=1e-6
        )

    def test_single_argument(self, german_linear_model):
        np.testing.assert_allclose(
            ell(german_linear_model, [2.5, 0.0, 0.0]),
            2.5 * float(psi_H(german_linear_model, 1.0)),
            rtol=1e-12,
        )

    @pytest.mark.parametrize("d", [1, 2, 3, 5])
    def test_ones_give_psi_H(self, german_linear_model, d):
        np.testing.assert_allclose(
            ell(german_linear_model, np.ones(d), use_closed=False),
            psi_H(german_linear_model, float(d)),
            rtol=1e-6,
        )

    def test_homogeneity(self, german_linear_model, rng):
        for _ in range(5):
            t = 0.25 + 2.0 * rng.uniform(3)
            scale = 0.5 + 3.0 * rng.uniform()
            np.testing.assert_allclose(
                ell(german_linear_model, scale * t),
                scale * ell(german_linear_model, t),
                rtol=1e-6,
            )

    def test_bounds(self, german_exp_model, rng):
        psi_one = float(psi_H(german_exp_model, 1.0))
        for _ in range(5):
            t = 0.25 + 2.0 * rng.uniform(4)
            value = ell(german_exp_model, t)
            assert t.max() * psi_one <= value * (1.0 + 1e-8)
            assert value <= t.sum() * psi_one * (1.0 + 1e-8)

    def test_monotone_in_each_argument(self, frechet_model):
        base = ell(frechet_model, [1.0, 1.0, 1.0])
        assert ell(frechet_model, [1.5, 1.0, 1.0]) >= base
        assert ell(frechet_model, [1.0, 1.0, 2.0]) >= base

    @pytest.mark.parametrize(
        "t", [[], [0.0, 0.0], [1.0, math.inf], [1.0, -0.5], [math.nan]]
    )
    def test_invalid_arguments(self, frechet_model, t):
        with pytest.raises(InvalidArgumentError):
            ell(frechet_model, t)


class TestNormalize:
    def test_family_45_scale(self):
        model = lookup("bondesson-45").model()
        np.testing.assert_allclose(model.scale_c, FAMILY_45_PSI_ONE, rtol=1e-12)
        assert abs(model.psi_h_one - 1.0) <= 1e-9
        assert model.normalized

    def test_already_normalized(self):
        pair = check_admissible(frechet(0.5), poisson(1.0))
        model = normalize(pair)
        np.testing.assert_allclose(model.scale_c, 1.0, rtol=1e-9)

    def test_quadrature_only_pair(self, german_linear_model):
        model = normalize(german_linear_model.pair)
        assert model.normalized
        np.testing.assert_allclose(psi_H(model, 1.0, use_closed=False), 1.0, rtol=1e-8)

    def test_rescaling_divides_psi_H(self, german_linear_model):
        model = lookup("german-linear").model()
        x = np.array([0.5, 2.0])
        np.testing.assert_allclose(
            psi_H(model, x), psi_H(german_linear_model, x) / model.scale_c, rtol=1e-12
        )


class TestDualPair:
    def test_dual_of_levy_bernoulli_is_poisson(self):
        pair = check_admissible(levy_bernoulli(), compound_poisson_exponential(1.0, 1.0))
        dual = dual_pair(pair)
        assert dual.certificate == AdmissibilityRule.DUALITY
        assert dual.L.levy.total_mass == 1.0
        np.testing.assert_allclose(dual.L.levy.survival_function([0.5, 1.5]), [1.0, 0.0])

    def test_roles_are_switched(self, german_linear_model):
        dual = dual_pair(german_linear_model.pair)
        x = np.array([0.5, 2.0])
        np.testing.assert_allclose(dual.F.psi(x), german_linear_model.L(x))
        np.testing.assert_allclose(dual.L(x), german_linear_model.pair.F.psi(x))

    def test_psi_H_is_preserved(self, german_linear_model):
        dual = IdtModel(pair=dual_pair(german_linear_model.pair))
        np.testing.assert_allclose(
            psi_H(dual, [0.5, 2.0], use_closed=False),
            psi_H(german_linear_model, [0.5, 2.0]),
            rtol=1e-6,
        )

    def test_involution(self, german_linear_model):
        twice = dual_pair(dual_pair(german_linear_model.pair))
        grid = np.linspace(0.05, 0.95, 19)
        np.testing.assert_allclose(twice.F(grid), german_linear_model.pair.F(grid), atol=1e-9)
        x = np.array([0.5, 1.0, 4.0])
        np.testing.assert_allclose(twice.L(x), german_linear_model.L(x), atol=1e-9)


class TestStructure:
    def test_compound_poisson_without_killing(self, german_linear_model):
        assert is_compound_poisson(german_linear_model)
        assert not has_killing(german_linear_model)

    def test_unbounded_support_is_not_compound_poisson(self, frechet_model):
        assert not is_compound_poisson(frechet_model)

    def test_positive_left_end_kills(self):
        shifted = DistributionF(
            cdf=lambda x: np.where(as_array(x) < 0.3, 0.0, np.clip(as_array(x), 0.0, 1.0)),
            left_support=0.3,
            right_support=1.0,
            breakpoints=(0.3, 1.0),
        )
        model = IdtModel(pair=check_admissible(shifted, poisson(1.0)))
        assert has_killing(model)


class TestIncrementPsi1:
    def test_zero_argument(self, german_exp_model):
        assert increment_psi1(german_exp_model, 1.0, 1.0, 0.0) == 0.0

    @pytest.mark.parametrize("t,x,alpha", [(1.0, 1.0, 2.0), (0.5, 2.0, 1.0), (2.0, 0.5, 0.5)])
    def test_exp_family_with_poisson(self, german_exp_model, t, x, alpha):
        # -log F(s) = (1 - s)₊ and Ψ_L(u) = 1 - e^{-u}: x (1 - (1 - e^{-k}) / k), k = α x / (x + t).
        k = alpha * x / (x + t)
        expected = x * (1.0 + math.expm1(-k) / k)
        np.testing.assert_allclose(
            increment_psi1(german_exp_model, t, x, alpha), expected, rtol=1e-7
        )

    def test_unbounded_support(self, frechet_model):
        with pytest.raises(UnboundedSupportError):
            increment_psi1(frechet_model, 1.0, 1.0, 1.0)

    def test_invalid_times(self, german_exp_model):
        with pytest.raises(InvalidArgumentError):
            increment_psi1(german_exp_model, 0.0, 1.0, 1.0)
