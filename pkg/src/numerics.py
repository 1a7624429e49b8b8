"""
Shared numerical kernels: adaptive quadrature on finite and semi-infinite
domains and generalized inverses of monotone functions.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import InvalidArgumentError, NonConvergenceError, OutOfRangeError
from .type_definitions import Direction, IntegrationResult

DEFAULT_REL_TOL: float = 1e-8
ABS_FLOOR: float = 1e-12
INVERSE_ABS_TOL: float = 1e-12
MAX_REL_TOL: float = 1e-2

_QUAD_MIN_LIMIT: int = 200
_BRACKET_CAP: float = 1e300


def integrate_adaptive(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = DEFAULT_REL_TOL,
    points: Optional[Sequence[float]] = None,
    abs_floor: float = ABS_FLOOR,
) -> IntegrationResult:
    """
    Integrate f over (lo, hi) with scipy's adaptive Gauss-Kronrod quadrature.

    A semi-infinite range (lo, ∞) is mapped onto (0, 1) through
    s = lo + u / (1 - u); breakpoints are mapped the same way. The integrands
    met in this library decay like 1 - F(s)^x, so the transformed integrand
    stays bounded.

    Args:
        f (Callable[[float], float]): Integrand, finite almost everywhere on (lo, hi).
        lo (float): Finite lower limit.
        hi (float): Upper limit, may be `math.inf`.
        rel_tol (float, optional): Relative tolerance in (0, 1e-2]. Defaults to 1e-8.
        points (Optional[Sequence[float]], optional): Known kinks or jumps of f.
        abs_floor (float, optional): Absolute tolerance floor. Defaults to 1e-12.

    Returns:
        IntegrationResult: Value, absolute error estimate and evaluation count.

    Raises:
        InvalidArgumentError: If the tolerance or the limits are invalid.
        NonConvergenceError: If the error estimate exceeds max(rel_tol·|value|, abs_floor).
    """
    if not 0.0 < rel_tol <= MAX_REL_TOL:
        raise InvalidArgumentError(f"rel_tol must lie in (0, {MAX_REL_TOL}], got {rel_tol}.")
    if not math.isfinite(lo) or hi < lo:
        raise InvalidArgumentError(f"Invalid integration range ({lo}, {hi}).")
    if hi == lo:
        return IntegrationResult(value=0.0, abs_error_estimate=0.0, evaluations=1)

    breakpoints: list[float] = sorted(
        {float(p) for p in (points or ()) if lo < p < hi and math.isfinite(p)}
    )

    if math.isinf(hi):

        def integrand(u: float) -> float:
            gap: float = 1.0 - u
            return float(f(lo + u / gap)) / (gap * gap)

        a, b = 0.0, 1.0
        breakpoints = [(p - lo) / (1.0 + p - lo) for p in breakpoints]
    else:

        def integrand(u: float) -> float:
            return float(f(u))

        a, b = float(lo), float(hi)

    limit: int = max(_QUAD_MIN_LIMIT, 4 * (len(breakpoints) + 1))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        output = quad(
            integrand,
            a,
            b,
            epsabs=abs_floor,
            epsrel=rel_tol,
            limit=limit,
            points=breakpoints or None,
            full_output=1,
        )

    value, abs_error = float(output[0]), abs(float(output[1]))
    evaluations: int = max(1, int(output[2].get("neval", 1)))
    result = IntegrationResult(
        value=value, abs_error_estimate=abs_error, evaluations=evaluations
    )

    if not math.isfinite(value) or abs_error > max(rel_tol * abs(value), abs_floor):
        raise NonConvergenceError(
            f"Quadrature on ({lo}, {hi}) stopped at {value!r} with error estimate "
            f"{abs_error:.3e} after {evaluations} evaluations.",
            partial=result,
        )
    return result


@dataclass(frozen=True)
class MonotoneFn:
    """
    A monotone callable on an interval of [0, ∞] with an optional closed inverse.

    The evaluator must accept the interval end points, `math.inf` included.

    Attributes:
        direction (Direction): Increasing or decreasing.
        evaluator (Callable[[float], float]): The function itself.
        lo (float): Left end of the domain.
        hi (float): Right end of the domain, possibly `math.inf`.
        inverse (Optional[Callable[[float], float]]): Closed-form generalized inverse.
    """

    direction: Direction
    evaluator: Callable[[float], float]
    lo: float = 0.0
    hi: float = math.inf
    inverse: Optional[Callable[[float], float]] = None

    def __call__(self, x: float) -> float:
        return float(self.evaluator(x))

    def range_closure(self) -> tuple[float, float]:
        ends: list[float] = [self(self.lo), self(self.hi)]
        return min(ends), max(ends)

    def reached(self, x: float, y: float) -> bool:
        if self.direction == Direction.INCREASING:
            return self(x) >= y
        return self(x) <= y

    def check_monotone(self, grid: Sequence[float], slack: float = 1e-12) -> None:
        """
        Spot-check monotonicity on a grid of the domain.

        Raises:
            InvalidArgumentError: If the values move against the declared direction.
        """
        values = np.array([self(x) for x in grid])
        steps = np.diff(values)
        if self.direction == Direction.DECREASING:
            steps = -steps
        if np.any(steps < -slack):
            raise InvalidArgumentError(
                f"Function is not {self.direction} on the sampled grid."
            )


def generalized_inverse(
    g: MonotoneFn, y: float, abs_tol: float = INVERSE_ABS_TOL
) -> float:
    """
    Left-continuous generalized inverse of a monotone function.

    Returns inf{x : g(x) ≥ y} for increasing g and inf{x : g(x) ≤ y} for
    decreasing g, with inf ∅ = ∞. A registered closed inverse is used as is;
    otherwise the bracket is expanded geometrically and bisected down to
    abs_tol on x (or to adjacent floats when x is large).

    Args:
        g (MonotoneFn): The monotone function.
        y (float): Level inside the closure of the range of g.
        abs_tol (float, optional): Absolute tolerance on x. Defaults to 1e-12.

    Returns:
        float: The generalized inverse, possibly `math.inf`.

    Raises:
        OutOfRangeError: If y lies outside the closure of the range of g.
    """
    y = float(y)
    range_lo, range_hi = g.range_closure()
    slack: float = 1e-15 * (1.0 + abs(y))
    if math.isnan(y) or y < range_lo - slack or y > range_hi + slack:
        raise OutOfRangeError(
            f"Level {y} lies outside the range [{range_lo}, {range_hi}]."
        )

    if g.inverse is not None:
        return float(g.inverse(y))

    if g.reached(g.lo, y):
        return float(g.lo)

    lower: float = float(g.lo)
    if math.isfinite(g.hi):
        if not g.reached(g.hi, y):
            return math.inf
        upper: float = float(g.hi)
    else:
        upper = lower + 1.0
        while not g.reached(upper, y):
            lower = upper
            upper = 2.0 * upper
            if upper > _BRACKET_CAP:
                return math.inf

    while upper - lower > abs_tol:
        middle: float = 0.5 * (lower + upper)
        if middle <= lower or middle >= upper:
            break
        if g.reached(middle, y):
            upper = middle
        else:
            lower = middle
    return upper


def inverse_on_array(g: MonotoneFn, ys: np.ndarray) -> np.ndarray:
    """Elementwise generalized_inverse."""
    flat = np.asarray(ys, dtype=float).ravel()
    return np.array([generalized_inverse(g, y) for y in flat]).reshape(np.shape(ys))
