import math
from dataclasses import dataclass, field

import numpy as np

from src.core._arrays import ArrayFn, as_array, zero_times_inf
from src.errors import InvalidArgumentError


def levy_weight(s) -> np.ndarray:
    """1 on (0, 1], 0 beyond: the weight under which H_t is the Lévy path itself."""
    s = as_array(s)
    return np.where((s > 0.0) & (s <= 1.0), 1.0, 0.0)


@dataclass(frozen=True)
class PathSample:
    """
    A simulated path t ↦ H_t = Σ_k m_k w(p_k / t) on [0, horizon].

    For the direct construction the points p_k are the jump times of L and the
    marks m_k its jump sizes; for the LePage series they are
    Γ_k Ψ_F(Z_k) / Ψ_H(1) and Z_k. In both cases w = -log F(· -).

    Attributes:
        jump_times (np.ndarray): Increasing points p_k.
        jump_values (np.ndarray): Marks m_k > 0, ∞ for a killing jump.
        weight (ArrayFn): w = -log F(· -), non-increasing.
        horizon (float): Right end of the simulated window.
        support_end (float): u_F; p_k / t ≥ u_F contributes nothing.
        exact (bool): Whether the path was simulated without truncation.
        truncation_error_bound (float): Bound on E[H_horizon - simulated H_horizon].
    """

    jump_times: np.ndarray
    jump_values: np.ndarray
    weight: ArrayFn = field(repr=False)
    horizon: float
    support_end: float = math.inf
    exact: bool = True
    truncation_error_bound: float = 0.0

    def __post_init__(self) -> None:
        order = np.argsort(self.jump_times, kind="stable")
        object.__setattr__(self, "jump_times", as_array(self.jump_times)[order])
        object.__setattr__(self, "jump_values", as_array(self.jump_values)[order])

    def __len__(self) -> int:
        return int(self.jump_times.size)

    def __call__(self, t) -> np.ndarray:
        return self.evaluate(t)

    def _weights(self, t: float) -> np.ndarray:
        return as_array(self.weight(self.jump_times / t))

    def evaluate(self, t) -> np.ndarray:
        """H_t, right-continuous and non-decreasing, with H_0 = 0."""
        t = as_array(t)
        if np.any(t < 0.0) or np.any(t > self.horizon * (1.0 + 1e-12)):
            raise InvalidArgumentError(f"t must lie in [0, {self.horizon}].")
        out = np.zeros(t.shape)
        for index, value in np.ndenumerate(t):
            if value > 0.0 and self.jump_times.size:
                out[index] = float(
                    np.sum(zero_times_inf(self.jump_values, self._weights(value)))
                )
        return out

    def driving_sum(self, t: float) -> float:
        """Σ_{p_k ≤ t} m_k, the driving Lévy path L_t for the direct construction."""
        return float(np.sum(self.jump_values[self.jump_times <= t]))

    def epochs(self, grid: int = 0) -> np.ndarray:
        """
        Times at which the path is reported: the epochs p_k / u_F at which a
        point starts to contribute, optionally merged with an equispaced grid.
        """
        times: set[float] = {0.0, self.horizon}
        if math.isfinite(self.support_end):
            entry = self.jump_times / self.support_end
            times.update(float(e) for e in entry[entry <= self.horizon])
        if grid > 0:
            times.update(float(v) for v in np.linspace(0.0, self.horizon, grid + 1))
        return np.array(sorted(times))

    def increment_parts(self, t: float, x: float) -> tuple[float, float]:
        """
        Split H_{t+x} - H_t = X₁ + X₂, where X₂ collects the points that
        already contributed at time t and X₁ the points with
        u_F t < p ≤ u_F (t + x).

        Raises:
            InvalidArgumentError: If u_F = ∞ or t + x exceeds the horizon.
        """
        if not math.isfinite(self.support_end):
            raise InvalidArgumentError("The increment split needs u_F < ∞.")
        if not (t > 0.0 and x > 0.0 and t + x <= self.horizon * (1.0 + 1e-12)):
            raise InvalidArgumentError(f"Need 0 < t < t + x ≤ {self.horizon}.")
        old = self.jump_times <= self.support_end * t
        new = ~old & (self.jump_times <= self.support_end * (t + x))
        later = as_array(self.weight(self.jump_times / (t + x)))
        earlier = as_array(self.weight(self.jump_times / t))
        # Equal weights, including ∞ = ∞ for killed points, contribute nothing.
        gaps = np.where(
            later[old] == earlier[old], 0.0, later[old] - earlier[old]
        )
        x2 = float(np.sum(zero_times_inf(self.jump_values[old], gaps)))
        x1 = float(np.sum(zero_times_inf(self.jump_values[new], later[new])))
        return x1, x2
