"""
The strong-IDT subordinator H of a pair (F, L) as an analytical object.

H_t = ∫ -log F(s/t-) dL_s. Its Laplace exponent at a vector t is

    ℓ(t) = ∫ ∫₀^∞ (1 - ∏_k F(s/t_k)^y) ds ν_L(dy)

and its one-dimensional margins are driven by Ψ_H(x) = ∫ Ψ_F(x y) ν_L(dy).
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from src.core import (
    BernsteinFunction,
    DistributionF,
    LevyMeasure,
    distribution_from_levy,
    levy_from_distribution,
)
from src.core._arrays import ArrayFn, as_array, map_scalar, zero_times_inf
from src.errors import (
    InconclusiveError,
    InvalidArgumentError,
    NonConvergenceError,
    NotAdmissibleError,
    UnboundedSupportError,
)
from src.logger import ColoredLogger, LogLevel
from src.numerics import DEFAULT_REL_TOL, integrate_adaptive
from src.type_definitions import AdmissibilityRule

logger = ColoredLogger(name=__name__)

ADMISSIBILITY_CAP: float = 1e12
NORMALIZE_REL_TOL: float = 1e-11
NORMALIZE_CHECK_TOL: float = 1e-9

# Dyadic blocks (2^j, 2^{j+1}] for |j| < _DYADIC_RANGE in the divergence test.
_DYADIC_RANGE: int = 128
_DYADIC_TAIL: int = 32
# Block ratios at or above this are non-decreasing up to rounding.
_DECAY_RATIO: float = 1.0 - 1e-12

ClosedEll = Callable[[ArrayFn, np.ndarray], float]


@dataclass(frozen=True)
class IdtPair:
    """
    A pair (F, L) with its admissibility verdict.

    Attributes:
        F (DistributionF): The distribution function.
        L (BernsteinFunction): The driftless Lévy subordinator, through Ψ_L.
        admissible (bool): Whether Ψ_H(1) = ∫ Ψ_F(y) ν_L(dy) is finite.
        certificate (AdmissibilityRule): The rule that decided admissibility.
        psi_h_one (Optional[float]): Ψ_H(1) when the rule computed it.
    """

    F: DistributionF
    L: BernsteinFunction
    admissible: bool
    certificate: AdmissibilityRule
    psi_h_one: Optional[float] = None


@dataclass(frozen=True)
class IdtModel:
    """
    An admissible pair with F replaced by F(c ·).

    Closed forms are registered for the pair as given (c = 1); the model
    divides them by c.

    Attributes:
        pair (IdtPair): The underlying pair.
        scale_c (float): The rescaling constant c > 0.
        normalized (bool): Whether c was chosen so that Ψ_H(1) = 1.
        family_id (str): Catalog identifier, "custom" for hand-built pairs.
        closed_psi_H (Optional[ArrayFn]): Ψ_H of the pair in closed form.
        closed_ell (Optional[ClosedEll]): ℓ in closed form, given this model's Ψ_H
            and a vector of positive entries.
        rel_tol (float): Quadrature tolerance.
    """

    pair: IdtPair
    scale_c: float = 1.0
    normalized: bool = False
    family_id: str = "custom"
    closed_psi_H: Optional[ArrayFn] = field(default=None, repr=False)
    closed_ell: Optional[ClosedEll] = field(default=None, repr=False)
    rel_tol: float = DEFAULT_REL_TOL

    def __post_init__(self) -> None:
        if not self.pair.admissible:
            raise NotAdmissibleError(
                f"({self.pair.F.name}, {self.pair.L.name}) is not admissible."
            )
        if not 0.0 < self.scale_c < math.inf:
            raise InvalidArgumentError(f"scale_c must be positive, got {self.scale_c}.")

    @cached_property
    def F(self) -> DistributionF:
        return self.pair.F.rescaled(self.scale_c)

    @property
    def L(self) -> BernsteinFunction:
        return self.pair.L

    @cached_property
    def levy(self) -> LevyMeasure:
        """
        ν_H with ν_H((t, ∞]) = ∫ ν_F((t/y, ∞]) ν_L(dy), the Lévy measure of H₁.
        """
        nu_F: LevyMeasure = levy_from_distribution(self.F)
        nu_L: LevyMeasure = self.L.levy
        total: float = float(zero_times_inf(nu_F.total_mass, nu_L.total_mass))
        atom: float = float(
            zero_times_inf(nu_F.atom_at_infinity, nu_L.total_mass)
            + zero_times_inf(nu_F.total_mass, nu_L.atom_at_infinity)
        )

        def evaluate(t: float) -> float:
            return nu_L.integrate(
                lambda y: float(nu_F.survival_function(t / y)), rel_tol=self.rel_tol
            )

        return LevyMeasure(
            survival=lambda t: map_scalar(evaluate, t),
            total_mass=total,
            atom_at_infinity=min(atom, total),
            name=f"ν_H[{self.family_id}]",
            rel_tol=self.rel_tol,
        )

    @cached_property
    def psi_H(self) -> BernsteinFunction:
        """Ψ_H as a Bernstein function, closed or by quadrature per `psi_H`."""
        return BernsteinFunction(
            levy=self.levy,
            closed_form=lambda x: psi_H(self, x),
            name=f"Ψ_H[{self.family_id}]",
        )

    @property
    def psi_h_one(self) -> float:
        return float(psi_H(self, 1.0))


def _lower_block_sums(F: DistributionF, nu: LevyMeasure) -> np.ndarray:
    """
    b_j = Ψ_F(2^j) ν((2^j, 2^{j+1}]) for |j| < _DYADIC_RANGE, each a lower
    bound of ∫ Ψ_F dν over its block.
    """
    exponents = np.arange(-_DYADIC_RANGE, _DYADIC_RANGE, dtype=float)
    left = np.power(2.0, exponents)
    masses = np.maximum(
        as_array(nu.survival_function(left)) - as_array(nu.survival_function(2.0 * left)),
        0.0,
    )
    return as_array(F.psi(left)) * masses


def _diverges(blocks: np.ndarray, cap: float) -> bool:
    """
    Divergence verdict on the dyadic lower sums.

    Certain when the sum exceeds `cap`. Otherwise a heuristic: the last
    _DYADIC_TAIL blocks at either end never decrease (up to rounding), as
    for a logarithmically divergent ∫ y^{-1} dy whose lower sums grow too
    slowly to reach the cap. Tails that decay, however slowly, are left to
    the quadrature, which either converges or ends Inconclusive.
    """
    if not math.isfinite(float(blocks.sum())) or float(blocks.sum()) > cap:
        return True
    for tail in (blocks[-_DYADIC_TAIL:], blocks[:_DYADIC_TAIL][::-1]):
        if np.all(tail > 0.0):
            ratios = tail[1:] / tail[:-1]
            if float(ratios.min()) >= _DECAY_RATIO:
                return True
    return False


def check_admissible(
    F: DistributionF,
    L: BernsteinFunction,
    cap: float = ADMISSIBILITY_CAP,
    rel_tol: float = DEFAULT_REL_TOL,
) -> IdtPair:
    """
    Decide whether Ψ_H(1) = ∫ Ψ_F(y) ν_L(dy) is finite.

    Fast paths: L compound Poisson with finite jump mean, or Ψ_F bounded with
    Ψ_F'(0) < ∞. Otherwise the dyadic lower sums are inspected for divergence
    (sum above `cap`, or blocks that never decrease at either end) before the
    integral itself is computed.

    Args:
        F (DistributionF): The distribution function.
        L (BernsteinFunction): Ψ_L of a driftless subordinator.
        cap (float, optional): Divergence cap of the lower sums.
        rel_tol (float, optional): Quadrature tolerance.

    Returns:
        IdtPair: The pair with its verdict and certificate.

    Raises:
        InconclusiveError: If the quadrature neither converges nor diverges.
    """
    nu: LevyMeasure = L.levy
    if nu.finite and nu.jump_mean < math.inf:
        return IdtPair(F, L, True, AdmissibilityRule.CP_FINITE_JUMP_MEAN)
    if F.bounded and F.derivative_at_zero < math.inf:
        return IdtPair(F, L, True, AdmissibilityRule.BOUNDED_FINITE_DERIVATIVE)
    if nu.atom_at_infinity > 0.0 and not F.bounded:
        return IdtPair(F, L, False, AdmissibilityRule.KILLED_UNBOUNDED)
    if _diverges(_lower_block_sums(F, nu), cap):
        logger.log(
            LogLevel.INFO, f"({F.name}, {L.name}): lower sums diverge, not admissible."
        )
        return IdtPair(F, L, False, AdmissibilityRule.DIVERGENT_LOWER_SUMS)
    try:
        value: float = _integrate_psi_H(F, L, 1.0, rel_tol)
    except NonConvergenceError as error:
        raise InconclusiveError(
            f"({F.name}, {L.name}): ∫ Ψ_F dν_L neither converged nor exceeded {cap:g}."
        ) from error
    if not math.isfinite(value) or value > cap:
        return IdtPair(F, L, False, AdmissibilityRule.DIVERGENT_LOWER_SUMS)
    return IdtPair(F, L, True, AdmissibilityRule.QUADRATURE, psi_h_one=value)


def _integrate_psi_H(
    F: DistributionF, L: BernsteinFunction, x: float, rel_tol: float
) -> float:
    """
    Ψ_H(x) of the pair (F, L) without closed forms for Ψ_H.

    With Ψ_F closed the integral against ν_L is one-dimensional; with Ψ_L
    closed, Tonelli gives ∫₀^∞ Ψ_L(-x log F(s)) ds; otherwise nested quadrature.
    """
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return float(zero_times_inf(F.right_support, L.limit))
    if F.closed_psi is not None or not L.has_closed_form:
        return L.levy.integrate(lambda y: float(F.psi(x * y)), rel_tol=rel_tol)
    killed_part: float = (
        float(zero_times_inf(F.left_support, L.limit)) if F.left_support > 0.0 else 0.0
    )
    if math.isinf(killed_part):
        return math.inf
    body = integrate_adaptive(
        lambda s: float(L(x * float(F.neg_log_cdf(s)))),
        F.left_support,
        F.right_support,
        rel_tol=rel_tol,
        points=F.quadrature_points(),
    )
    return killed_part + body.value


def psi_H(
    model: IdtModel,
    x,
    use_closed: bool = True,
    rel_tol: Optional[float] = None,
) -> np.ndarray:
    """
    Ψ_H(x) = ∫ Ψ_{F(c·)}(x y) ν_L(dy) = (1/c) ∫ Ψ_F(x y) ν_L(dy).

    Args:
        model (IdtModel): The model.
        x: Non-negative abscissae.
        use_closed (bool, optional): Use a registered closed form. Defaults to True.
        rel_tol (Optional[float], optional): Quadrature tolerance override.

    Returns:
        np.ndarray: Ψ_H(x), shaped like x.

    Raises:
        NonConvergenceError: Propagated from quadrature.
    """
    x = as_array(x)
    if np.any(x < 0.0):
        raise InvalidArgumentError("Ψ_H is defined on [0, ∞].")
    if use_closed and model.closed_psi_H is not None:
        safe = np.where(np.isinf(x), 1.0, x)
        values = as_array(model.closed_psi_H(safe)) / model.scale_c
        limit: float = float(zero_times_inf(model.F.right_support, model.L.limit))
        return np.where(x == 0.0, 0.0, np.where(np.isinf(x), limit, values))
    tol: float = rel_tol or model.rel_tol
    return map_scalar(lambda v: _integrate_psi_H(model.F, model.L, v, tol), x)


def _validated_arguments(t) -> np.ndarray:
    t = as_array(t).ravel()
    if t.size == 0:
        raise InvalidArgumentError("ℓ needs at least one argument.")
    if np.any(np.isnan(t)) or np.any(np.isinf(t)):
        raise InvalidArgumentError("ℓ is only defined for finite arguments.")
    if np.any(t < 0.0):
        raise InvalidArgumentError("ℓ is only defined for non-negative arguments.")
    if not np.any(t > 0.0):
        raise InvalidArgumentError("ℓ needs at least one positive argument.")
    return t[t > 0.0]


def ell(model: IdtModel, t, use_closed: bool = True) -> float:
    """
    ℓ(t₁, …, t_d) = -log E[exp(-Σ_k H_{t_k})].

    Zero entries are dropped (they contribute the factor F^0 = 1).

    Args:
        model (IdtModel): The model.
        t: Non-negative finite entries, not all zero.
        use_closed (bool, optional): Use a registered closed form. Defaults to True.

    Returns:
        float: ℓ(t).

    Raises:
        InvalidArgumentError: On empty, infinite, negative or all-zero input.
        NonConvergenceError: Propagated from quadrature.
    """
    t = _validated_arguments(t)
    if t.size == 1:
        return float(t[0] * psi_H(model, 1.0, use_closed=use_closed))
    if use_closed and model.closed_ell is not None:
        return float(model.closed_ell(lambda x: psi_H(model, x), t))

    F, L = model.F, model.L
    t_max: float = float(t.max())
    lo: float = F.left_support * t_max
    hi: float = F.right_support * t_max
    points: list[float] = sorted(
        {b * float(tk) for b in F.quadrature_points() for tk in t} | {lo}
    )
    points = [p for p in points if 0.0 < p < hi]

    if L.has_closed_form:
        killed_part: float = float(zero_times_inf(lo, L.limit)) if lo > 0.0 else 0.0
        if math.isinf(killed_part):
            return math.inf
        body = integrate_adaptive(
            lambda s: float(L(float(np.sum(F.neg_log_cdf(s / t))))),
            lo,
            hi,
            rel_tol=model.rel_tol,
            points=points,
        )
        return killed_part + body.value

    maximum = DistributionF(
        cdf=lambda s: np.prod(
            as_array(F(as_array(s)[..., np.newaxis] / t)), axis=-1
        ),
        left_support=lo,
        right_support=hi,
        name=f"max[{F.name}]",
        breakpoints=tuple(points),
        rel_tol=model.rel_tol,
    )
    return L.levy.integrate(
        lambda y: float(maximum.psi_quadrature(y)), rel_tol=model.rel_tol
    )


def normalize(
    pair: IdtPair,
    family_id: str = "custom",
    closed_psi_H: Optional[ArrayFn] = None,
    closed_ell: Optional[ClosedEll] = None,
    rel_tol: float = DEFAULT_REL_TOL,
) -> IdtModel:
    """
    Rescale F so that Ψ_H(1) = 1.

    Since Ψ_{F(c·)} = Ψ_F / c, the constant is c = Ψ_H(1) of the pair.

    Args:
        pair (IdtPair): An admissible pair.
        family_id (str, optional): Catalog identifier.
        closed_psi_H (Optional[ArrayFn], optional): Ψ_H of the pair in closed form.
        closed_ell (Optional[ClosedEll], optional): ℓ in closed form.
        rel_tol (float, optional): Quadrature tolerance of the resulting model.

    Returns:
        IdtModel: The normalized model.

    Raises:
        NotAdmissibleError: If the pair is not admissible.
    """
    base = IdtModel(
        pair=pair,
        family_id=family_id,
        closed_psi_H=closed_psi_H,
        closed_ell=closed_ell,
        rel_tol=rel_tol,
    )
    scale_c: float = _tight_psi_h_one(base)
    model = IdtModel(
        pair=pair,
        scale_c=scale_c,
        normalized=True,
        family_id=family_id,
        closed_psi_H=closed_psi_H,
        closed_ell=closed_ell,
        rel_tol=rel_tol,
    )
    check: float = _tight_psi_h_one(model)
    if abs(check - 1.0) > NORMALIZE_CHECK_TOL:
        logger.log(
            LogLevel.WARNING,
            f"{family_id}: Ψ_H(1) = {check!r} after normalization by c = {scale_c!r}.",
        )
    else:
        logger.log(LogLevel.DEBUG, f"{family_id}: normalized with c = {scale_c!r}.")
    return model


def _tight_psi_h_one(model: IdtModel) -> float:
    try:
        return float(psi_H(model, 1.0, rel_tol=NORMALIZE_REL_TOL))
    except NonConvergenceError:
        logger.log(
            LogLevel.WARNING,
            f"{model.family_id}: Ψ_H(1) missed {NORMALIZE_REL_TOL:g}, "
            f"falling back to {model.rel_tol:g}.",
        )
        return float(psi_H(model, 1.0))


def dual_pair(pair: IdtPair) -> IdtPair:
    """
    The pair (F^{(L)}, L^{(F)}) with Ψ_{F^{(L)}} = Ψ_L and Ψ_{L^{(F)}} = Ψ_F.

    Both pairs share Ψ_H, so H₁ has the same law under either.

    Raises:
        NotAdmissibleError: If the pair is not admissible.
    """
    if not pair.admissible:
        raise NotAdmissibleError(f"({pair.F.name}, {pair.L.name}) is not admissible.")
    F_dual: DistributionF = distribution_from_levy(
        pair.L.levy, closed_psi=pair.L.closed_form
    )
    L_dual = BernsteinFunction(
        levy=levy_from_distribution(pair.F),
        closed_form=pair.F.closed_psi,
        quadrature=pair.F.psi_quadrature,
        name=f"Ψ[{pair.F.name}]",
    )
    return IdtPair(
        F=F_dual,
        L=L_dual,
        admissible=True,
        certificate=AdmissibilityRule.DUALITY,
        psi_h_one=pair.psi_h_one,
    )


def is_compound_poisson(model: IdtModel) -> bool:
    """H_t is compound Poisson iff Ψ_L is bounded and u_F < ∞."""
    return model.L.bounded and model.F.bounded


def has_killing(model: IdtModel) -> bool:
    """H has a positive killing rate iff F has a positive left end point or ν_L({∞}) > 0."""
    return model.F.left_support > 0.0 or model.L.killing


def increment_psi1(model: IdtModel, t: float, x: float, alpha: float) -> float:
    """
    Ψ₁(α) = x ∫₀^{u_F} Ψ_L(-α log F((x y + u_F t) / (x + t))) dy, the Bernstein
    function of the part X₁ of H_{t+x} - H_t that is independent of (H_s)_{s ≤ t}.

    Args:
        model (IdtModel): A model with u_F < ∞.
        t (float): Left end of the increment, t > 0.
        x (float): Length of the increment, x > 0.
        alpha (float): Argument α ≥ 0.

    Returns:
        float: Ψ₁(α).

    Raises:
        UnboundedSupportError: If u_F = ∞.
    """
    F, L = model.F, model.L
    if not F.bounded:
        raise UnboundedSupportError(f"{F.name}: X₁ needs u_F < ∞.")
    if not (t > 0.0 and x > 0.0 and alpha >= 0.0):
        raise InvalidArgumentError("increment_psi1 needs t > 0, x > 0 and α ≥ 0.")
    if alpha == 0.0:
        return 0.0
    u: float = F.right_support

    def integrand(y: float) -> float:
        return float(L(alpha * float(F.neg_log_cdf((x * y + u * t) / (x + t)))))

    # Kinks of F mapped back through s = (x y + u t)/(x + t).
    points: list[float] = [
        (b * (x + t) - u * t) / x for b in F.quadrature_points() if b > u * t / (x + t)
    ]
    body = integrate_adaptive(
        integrand,
        0.0,
        u,
        rel_tol=model.rel_tol,
        points=[p for p in points if 0.0 < p < u],
    )
    return x * body.value
