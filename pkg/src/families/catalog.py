import inspect
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from src.core import BernsteinFunction, DistributionF, StieltjesMeasure
from src.core import distribution_from_stieltjes
from src.core._arrays import ArrayFn, as_array
from src.core.subordinators import compound_poisson_exponential, poisson
from src.errors import InvalidArgumentError, UnknownFamilyError
from src.idt import IdtModel, IdtPair, check_admissible, normalize
from src.idt.model import ClosedEll

from . import bondesson, distributions
from .closed_forms import closed_ell_exp_family, closed_ell_frechet, exp_e1

PsiHRule = Callable[[BernsteinFunction], Optional[ArrayFn]]


@dataclass(frozen=True)
class FamilySpec:
    """
    A catalog entry: a distribution F, its default L and registered closed forms.

    Attributes:
        id (str): Catalog identifier.
        params (Mapping[str, float]): Parameter values the entry was built with.
        F (DistributionF): The distribution function.
        L (BernsteinFunction): The default Lévy subordinator.
        provenance (str): Short description of where the closed forms come from.
        psi_H_rule (Optional[PsiHRule]): Given L, Ψ_H in closed form or None.
        closed_ell (Optional[ClosedEll]): ℓ in closed form, valid for every L.
        stieltjes (Optional[StieltjesMeasure]): ρ when H₁ is of Bondesson type.
    """

    id: str
    params: Mapping[str, float]
    F: DistributionF
    L: BernsteinFunction
    provenance: str
    psi_H_rule: Optional[PsiHRule] = field(default=None, repr=False)
    closed_ell: Optional[ClosedEll] = field(default=None, repr=False)
    stieltjes: Optional[StieltjesMeasure] = field(default=None, repr=False)

    @property
    def closed_forms(self) -> frozenset[str]:
        names: set[str] = set()
        if self.F.closed_psi is not None:
            names.add("psi_F")
        if self.F.closed_inverse is not None:
            names.add("inverse")
        if self.F.size_biased_sampler is not None:
            names.add("M-sampler")
        if self.closed_psi_H() is not None:
            names.add("psi_H")
        if self.closed_ell is not None:
            names.add("ell")
        if self.L.levy.point_mass is not None:
            names.add("Z-sampler")
        return frozenset(names)

    def closed_psi_H(self, L: Optional[BernsteinFunction] = None) -> Optional[ArrayFn]:
        if self.psi_H_rule is None:
            return None
        return self.psi_H_rule(L or self.L)

    def pair(self, L: Optional[BernsteinFunction] = None) -> IdtPair:
        return check_admissible(self.F, L or self.L)

    def model(
        self, L: Optional[BernsteinFunction] = None, normalized: bool = True
    ) -> IdtModel:
        """
        The model of this entry with L (defaults to the entry's L).

        Raises:
            NotAdmissibleError: If (F, L) is not admissible.
        """
        pair: IdtPair = self.pair(L)
        closed_psi: Optional[ArrayFn] = self.closed_psi_H(pair.L)
        if normalized:
            return normalize(
                pair,
                family_id=self.id,
                closed_psi_H=closed_psi,
                closed_ell=self.closed_ell,
            )
        return IdtModel(
            pair=pair,
            family_id=self.id,
            closed_psi_H=closed_psi,
            closed_ell=self.closed_ell,
        )


def _for_default(default_L: BernsteinFunction, closed: ArrayFn) -> PsiHRule:
    return lambda L: closed if L is default_L else None


def _unit_exponential_L() -> BernsteinFunction:
    return compound_poisson_exponential(beta=1.0, rate=1.0)


def _levy_bernoulli(beta: float = 1.0, rate: float = 1.0) -> FamilySpec:
    return FamilySpec(
        id="levy-bernoulli",
        params={"beta": beta, "rate": rate},
        F=distributions.levy_bernoulli(),
        L=compound_poisson_exponential(beta=beta, rate=rate),
        provenance="Ψ_F(x) = 1 - e^{-x}, so H = L and Ψ_H = Ψ_L for every L",
        psi_H_rule=lambda L: L.closed_form,
    )


def _standard_poisson() -> FamilySpec:
    return FamilySpec(
        id="standard-poisson",
        params={},
        F=distributions.levy_bernoulli(),
        L=poisson(1.0),
        provenance="L = N with the Lévy-Bernoulli F: H is the standard Poisson process",
        psi_H_rule=lambda L: L.closed_form,
    )


def _german_linear() -> FamilySpec:
    L = _unit_exponential_L()

    def psi_H(x: np.ndarray) -> np.ndarray:
        inverse = 1.0 / as_array(x)
        return 1.0 - inverse * exp_e1(inverse)

    return FamilySpec(
        id="german-linear",
        params={},
        F=distributions.german_linear(),
        L=L,
        provenance="F(x) = min{x, 1}: Ψ_F(x) = x/(x+1), M has cdf x^{z+1}",
        psi_H_rule=_for_default(L, psi_H),
    )


def _german_exp() -> FamilySpec:
    L = poisson(1.0)
    F = distributions.german_exp()
    return FamilySpec(
        id="german-exp",
        params={},
        F=F,
        L=L,
        provenance="F(x) = min{exp(x-1), 1}: ℓ in closed form for every L",
        psi_H_rule=_for_default(L, F.closed_psi),
        closed_ell=closed_ell_exp_family,
    )


def _frechet(theta: float = 0.5) -> FamilySpec:
    L = poisson(1.0)
    F = distributions.frechet(theta)
    return FamilySpec(
        id="frechet",
        params={"theta": theta},
        F=F,
        L=L,
        provenance="Fréchet F with Ψ_F(x) = x^θ: Gumbel copula, L enters through Ψ_H(1)",
        psi_H_rule=_for_default(L, F.closed_psi),
        closed_ell=lambda psi_H, t: closed_ell_frechet(theta, float(psi_H(1.0)), t),
    )


def _galambos() -> FamilySpec:
    L = poisson(1.0)
    F = distributions.galambos()
    return FamilySpec(
        id="galambos",
        params={},
        F=F,
        L=L,
        provenance="L = N and F(x) = 1 - e^{-x}: Galambos copula",
        psi_H_rule=_for_default(L, F.closed_psi),
    )


def _molchanov_floor() -> FamilySpec:
    L = poisson(1.0)
    F = distributions.molchanov_floor()
    return FamilySpec(
        id="molchanov-floor",
        params={},
        F=F,
        L=L,
        provenance="L = N and F(x) = exp(-⌊1/x⌋)",
        psi_H_rule=_for_default(L, F.closed_psi),
    )


def _molchanov_exp() -> FamilySpec:
    L = poisson(1.0)
    F = distributions.molchanov_exp()
    return FamilySpec(
        id="molchanov-exp",
        params={},
        F=F,
        L=L,
        provenance="L = N and F(x) = min{1, exp(1 - 1/x)}",
        psi_H_rule=_for_default(L, F.closed_psi),
    )


def _bondesson(family_id: str, law: bondesson.BondessonLaw, params) -> FamilySpec:
    L = _unit_exponential_L()
    return FamilySpec(
        id=family_id,
        params=params,
        F=distribution_from_stieltjes(law.rho),
        L=L,
        provenance="F = F_ρ and L unit-exponential compound Poisson: Ψ_H(x) = ∫ x/(x+u) ρ(du)",
        psi_H_rule=_for_default(L, law.psi),
        stieltjes=law.rho,
    )


def _bondesson_45() -> FamilySpec:
    return _bondesson("bondesson-45", bondesson.family_45(), {})


def _bondesson_5(theta: float = 1.0) -> FamilySpec:
    return _bondesson("bondesson-5", bondesson.family_5(theta), {"theta": theta})


def _bondesson_33(theta: float = 1.0) -> FamilySpec:
    return _bondesson("bondesson-33", bondesson.family_33(theta), {"theta": theta})


def _bondesson_64(theta: float = 1.0) -> FamilySpec:
    return _bondesson("bondesson-64", bondesson.family_64(theta), {"theta": theta})


_BUILDERS: dict[str, Callable[..., FamilySpec]] = {
    "levy-bernoulli": _levy_bernoulli,
    "standard-poisson": _standard_poisson,
    "german-linear": _german_linear,
    "german-exp": _german_exp,
    "frechet": _frechet,
    "galambos": _galambos,
    "molchanov-floor": _molchanov_floor,
    "molchanov-exp": _molchanov_exp,
    "bondesson-45": _bondesson_45,
    "bondesson-5": _bondesson_5,
    "bondesson-33": _bondesson_33,
    "bondesson-64": _bondesson_64,
}


def family_ids() -> list[str]:
    return list(_BUILDERS)


def family_parameters(family_id: str) -> dict[str, float]:
    """Parameter names of a family with their defaults."""
    builder = _builder(family_id)
    return {
        name: parameter.default
        for name, parameter in inspect.signature(builder).parameters.items()
    }


def _builder(family_id: str) -> Callable[..., FamilySpec]:
    try:
        return _BUILDERS[family_id]
    except KeyError:
        raise UnknownFamilyError(
            f"Unknown family '{family_id}'. Known: {', '.join(_BUILDERS)}."
        ) from None


def lookup(family_id: str, **params: float) -> FamilySpec:
    """
    Build a catalog entry.

    Args:
        family_id (str): Catalog identifier.
        **params (float): Family parameters, e.g. theta=0.5.

    Returns:
        FamilySpec: The entry.

    Raises:
        UnknownFamilyError: If the identifier is not in the catalog.
        InvalidArgumentError: If a parameter is unknown or out of range.
    """
    known: dict[str, float] = family_parameters(family_id)
    unknown: list[str] = sorted(set(params) - set(known))
    if unknown:
        raise InvalidArgumentError(
            f"{family_id} takes {sorted(known) or 'no parameters'}, got {unknown}."
        )
    values = {name: float(value) for name, value in params.items()}
    if any(not math.isfinite(value) for value in values.values()):
        raise InvalidArgumentError(f"{family_id}: parameters must be finite.")
    return _builder(family_id)(**values)


def catalog() -> list[FamilySpec]:
    """Every catalog entry with default parameters."""
    return [builder() for builder in _BUILDERS.values()]
