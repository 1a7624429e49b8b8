"""
Seeded verification suite: deterministic identities and Monte-Carlo checks
of an IdtModel against closed forms, quadrature and other samplers.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from src.core import (
    DistributionF,
    StieltjesMeasure,
    distribution_from_levy,
    distribution_from_stieltjes,
    levy_from_distribution,
    stieltjes_from_distribution,
)
from src.errors import (
    IdtError,
    MSamplerUnavailableError,
    NotCompoundPoissonError,
    UnboundedSupportError,
    ZSamplerUnavailableError,
)
from src.idt import (
    IdtModel,
    IdtPair,
    dual_pair,
    ell,
    increment_psi1,
    is_compound_poisson,
    psi_H,
)
from src.infdiv import sample_bondesson_batch
from src.logger import ColoredLogger, LogLevel
from src.maxstable import (
    expected_stopping,
    sample_copula_batch,
    sample_copula_batch_with_stopping,
    sample_minstable_batch,
    sample_Q_batch,
)
from src.rng import RngStream
from src.samplers import DirectPathSampler, PathSampler, PathSamplerFactory
from src.type_definitions import (
    CheckResult,
    CurvePoint,
    PathSamplerArgs,
    SamplerKind,
    SuiteKind,
    VerifyConfig,
)

from .statistics import (
    empirical_bernstein,
    exp_rate_test,
    kendall_tau,
    ks_two_sample,
    ks_uniform,
    mean_with_error,
)

SIGMA_BAND: float = 3.0
BERNSTEIN_FLOOR: float = 0.02
KS_LEVEL: float = 0.01
STOCHASTIC_PASS_SHARE: float = 0.95
CONSISTENCY_TOL: float = 1e-6
CLOSED_PSI_TOL: float = 1e-6
CLOSED_ELL_TOL: float = 1e-4
FRECHET_TOL: float = 1e-5
NORMALIZATION_TOL: float = 1e-9
STOPPING_TOL: float = 0.05
STOPPING_DRAWS: int = 10_000
PATHWISE_TOL: float = 1e-10
PATHWISE_DRAWS: int = 200
ROUND_TRIP_TOL: float = 1e-9
ROUND_TRIP_POINTS: int = 1000
# Truncation tolerance for Monte-Carlo checks, well below their bands.
PATH_TOL: float = 1e-3

# Errors that mean a check does not apply to the model.
_INAPPLICABLE = (
    MSamplerUnavailableError,
    ZSamplerUnavailableError,
    NotCompoundPoissonError,
    UnboundedSupportError,
)


@dataclass
class VerificationReport:
    """
    Outcome of a suite run.

    overall_pass holds when every deterministic check passes and at least 95%
    of the Monte-Carlo checks pass; an empty report passes.
    """

    model_id: str
    seed: int
    checks: list[CheckResult] = field(default_factory=list)
    curve: list[CurvePoint] = field(default_factory=list)

    @property
    def stochastic_pass_share(self) -> float:
        stochastic = [check.passed for check in self.checks if check.stochastic]
        return sum(stochastic) / len(stochastic) if stochastic else 1.0

    @property
    def overall_pass(self) -> bool:
        deterministic = all(check.passed for check in self.checks if not check.stochastic)
        return deterministic and self.stochastic_pass_share >= STOCHASTIC_PASS_SHARE

    def failed(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "seed": self.seed,
            "overall_pass": self.overall_pass,
            "stochastic_pass_share": self.stochastic_pass_share,
            "checks": [check._asdict() for check in self.checks],
            "curve": [point._asdict() for point in self.curve],
        }


def _relative_error(value: float, reference: float) -> float:
    if value == reference:
        return 0.0
    return abs(value - reference) / max(abs(reference), 1e-300)


def round_trip_grid(F: DistributionF, size: int = ROUND_TRIP_POINTS) -> np.ndarray:
    """Evenly spaced points past u_F for bounded F, log-spaced on [1e-3, 1e3] otherwise."""
    if F.bounded:
        return np.linspace(0.0, 1.25 * F.right_support, size + 1)[1:]
    return np.geomspace(1e-3, 1e3, size)


class VerificationSuite:
    def __init__(
        self,
        model: IdtModel,
        config: VerifyConfig,
        logger: ColoredLogger,
        stieltjes: Optional[StieltjesMeasure] = None,
        params: Optional[Mapping[str, float]] = None,
    ) -> None:
        """
        Initializes a new instance of the VerificationSuite class.

        Check group i draws from the substream (i,) of the configured seed, so
        reports do not depend on which groups apply.

        Args:
            model (IdtModel): An admissible model.
            config (VerifyConfig): Suite kind, sample size, seed and grids.
            logger (ColoredLogger): Logger for PASS/FAIL records.
            stieltjes (Optional[StieltjesMeasure], optional): ρ of a Bondesson-type
                H₁, enabling the series curve.
            params (Optional[Mapping[str, float]], optional): Family parameters.
        """
        self.model: IdtModel = model
        self.config: VerifyConfig = config
        self.logger: ColoredLogger = logger
        self.stieltjes: Optional[StieltjesMeasure] = stieltjes
        self.params: Mapping[str, float] = params or {}
        self.report = VerificationReport(model_id=model.family_id, seed=config.seed)

    def _groups(self) -> list[tuple[str, Callable[[RngStream], None], bool]]:
        """(name, check group, runs in the quick suite)."""
        return [
            ("consistency", self.check_consistency, True),
            ("normalization", self.check_normalization, True),
            ("closed-psi-H", self.check_closed_psi_H, True),
            ("closed-ell", self.check_closed_ell, True),
            ("frechet-ell", self.check_frechet_ell, True),
            ("stopping-bound", self.check_stopping_bound, True),
            ("bernstein", self.check_bernstein_curve, True),
            ("bondesson-series", self.check_bondesson_series, False),
            ("pickands", self.check_pickands, False),
            ("copula", self.check_copula, False),
            ("stopping", self.check_stopping, False),
            ("minstable", self.check_minstable, False),
            ("strong-idt", self.check_strong_idt, False),
            ("duality", self.check_duality, False),
            ("cross-sampler", self.check_cross_sampler, False),
            ("increment", self.check_increment, False),
            ("increment-pathwise", self.check_increment_pathwise, False),
            ("round-trip", self.check_round_trip, True),
        ]

    def run(self) -> VerificationReport:
        root = RngStream(self.config.seed)
        for index, (name, group, quick) in enumerate(self._groups()):
            if self.config.suite == SuiteKind.QUICK and not quick:
                continue
            try:
                group(root.substream(index))
            except _INAPPLICABLE as error:
                self.logger.log(LogLevel.INFO, f"{name}: skipped ({error}).")
            except IdtError as error:
                self._record(name, math.nan, math.nan, False, 0, "error", False)
                self.logger.log(LogLevel.ERROR, f"{name}: {type(error).__name__}: {error}")
        return self.report

    def _record(
        self,
        name: str,
        statistic: float,
        threshold: float,
        passed: bool,
        n: int,
        oracle: str,
        stochastic: bool,
    ) -> None:
        check = CheckResult(
            name=name,
            statistic=float(statistic),
            threshold=float(threshold),
            passed=bool(passed),
            n=n,
            seed=self.config.seed,
            oracle=oracle,
            stochastic=stochastic,
        )
        self.report.checks.append(check)
        self.logger.log(
            LogLevel.PASS if check.passed else LogLevel.FAIL,
            f"{name}: statistic {check.statistic:.6g}, threshold {check.threshold:.6g}.",
        )

    def _record_band(
        self, name: str, deviation: float, band: float, n: int, oracle: str
    ) -> None:
        self._record(name, deviation, band, deviation <= band, n, oracle, True)

    def _record_ks(self, name: str, p_value: float, n: int, oracle: str) -> None:
        self._record(name, p_value, KS_LEVEL, p_value >= KS_LEVEL, n, oracle, True)

    @property
    def _psi_oracle(self) -> str:
        return "closed-form" if self.model.closed_psi_H is not None else "quadrature"

    def _path_sampler(
        self, kind: Optional[SamplerKind] = None, model: Optional[IdtModel] = None
    ) -> PathSampler:
        target: IdtModel = model or self.model
        if kind is None:
            kind = SamplerKind.DIRECT if is_compound_poisson(target) else SamplerKind.LEPAGE
        return PathSamplerFactory.create_sampler(
            kind, PathSamplerArgs(model=target, horizon=1.0, tol=PATH_TOL, logger=self.logger)
        )

    def _random_arguments(self, rng: RngStream, count: int, d: int) -> np.ndarray:
        return 0.25 + 2.0 * np.asarray(rng.uniform((count, d)), dtype=float)

    def check_consistency(self, rng: RngStream) -> None:
        """ℓ(1, …, 1) = Ψ_H(d), the latter by quadrature."""
        for d in range(1, self.config.max_consistency_dim + 1):
            value: float = ell(self.model, np.ones(d))
            reference: float = float(psi_H(self.model, float(d), use_closed=False))
            self._record(
                f"consistency-d{d}",
                _relative_error(value, reference),
                CONSISTENCY_TOL,
                _relative_error(value, reference) <= CONSISTENCY_TOL,
                0,
                "quadrature",
                False,
            )

    def check_normalization(self, rng: RngStream) -> None:
        if not self.model.normalized:
            return
        deviation: float = abs(self.model.psi_h_one - 1.0)
        self._record(
            "normalization",
            deviation,
            NORMALIZATION_TOL,
            deviation <= NORMALIZATION_TOL,
            0,
            self._psi_oracle,
            False,
        )

    def check_closed_psi_H(self, rng: RngStream) -> None:
        if self.model.closed_psi_H is None:
            return
        xs = np.array([0.5, 1.0, 2.0, 5.0, 10.0])
        closed = psi_H(self.model, xs)
        numeric = psi_H(self.model, xs, use_closed=False)
        deviation: float = max(_relative_error(a, b) for a, b in zip(closed, numeric))
        self._record(
            "closed-psi-H",
            deviation,
            CLOSED_PSI_TOL,
            deviation <= CLOSED_PSI_TOL,
            0,
            "quadrature",
            False,
        )

    def check_closed_ell(self, rng: RngStream) -> None:
        if self.model.closed_ell is None:
            return
        for d, count in ((2, 7), (3, 7), (4, 6)):
            deviation: float = max(
                _relative_error(ell(self.model, t), ell(self.model, t, use_closed=False))
                for t in self._random_arguments(rng, count, d)
            )
            self._record(
                f"closed-ell-d{d}",
                deviation,
                CLOSED_ELL_TOL,
                deviation <= CLOSED_ELL_TOL,
                0,
                "quadrature",
                False,
            )

    def check_frechet_ell(self, rng: RngStream) -> None:
        """ℓ(1, 1) = 2^θ for the normalized Fréchet family."""
        if self.model.family_id != "frechet" or not self.model.normalized:
            return
        reference: float = 2.0 ** self.params.get("theta", 0.5)
        deviation: float = _relative_error(
            ell(self.model, [1.0, 1.0], use_closed=False), reference
        )
        self._record(
            "frechet-ell-1-1",
            deviation,
            FRECHET_TOL,
            deviation <= FRECHET_TOL,
            0,
            "closed-form",
            False,
        )

    def check_stopping_bound(self, rng: RngStream) -> None:
        if not self.model.normalized:
            return
        d: int = self.config.dim
        value: float = expected_stopping(self.model, d)
        self._record(
            f"stopping-bound-d{d}", value, d * d, value <= d * d, 0, "closed-form", False
        )

    def _bernstein_checks(
        self, prefix: str, samples: np.ndarray, xs: np.ndarray, theory: np.ndarray
    ) -> list[CurvePoint]:
        estimates = empirical_bernstein(samples, xs)
        points: list[CurvePoint] = []
        for x, expected, (estimate, std_error) in zip(xs, theory, estimates):
            band: float = max(SIGMA_BAND * std_error, BERNSTEIN_FLOOR)
            self._record_band(
                f"{prefix}-x{x:g}", abs(estimate - expected), band, samples.size, self._psi_oracle
            )
            points.append(CurvePoint(float(x), float(expected), float(estimate), float(std_error)))
        return points

    def check_bernstein_curve(self, rng: RngStream) -> None:
        """Empirical Bernstein function of H₁ against Ψ_H."""
        xs = np.asarray(self.config.xs, dtype=float)
        if self.config.suite == SuiteKind.QUICK:
            xs = xs[::5]
        samples = self._path_sampler().sample_values(self.config.n, rng)
        curve = self._bernstein_checks("bernstein", samples, xs, psi_H(self.model, xs))
        if self.stieltjes is None:
            self.report.curve = curve

    def check_bondesson_series(self, rng: RngStream) -> None:
        """
        Bondesson series draws against Ψ_ρ. Ψ_ρ is Ψ_H of the pair before
        rescaling, i.e. c Ψ_H of the model.
        """
        if self.stieltjes is None:
            return
        xs = np.asarray(self.config.xs, dtype=float)
        samples = sample_bondesson_batch(self.stieltjes, self.config.n, rng)
        theory = self.model.scale_c * psi_H(self.model, xs)
        self.report.curve = self._bernstein_checks("bondesson-series", samples, xs, theory)

    def check_pickands(self, rng: RngStream) -> None:
        """E[Q_k] = 1/d and d E[max t_k Q_k] = ℓ(t)."""
        d, n = self.config.dim, self.config.n
        q = sample_Q_batch(self.model, d, n, rng)
        for k in range(d):
            mean, std_error = mean_with_error(q[:, k])
            self._record_band(
                f"pickands-mean-q{k + 1}",
                abs(mean - 1.0 / d),
                SIGMA_BAND * std_error,
                n,
                "closed-form",
            )
        if not self.model.normalized:
            return
        for index, t in enumerate(self._random_arguments(rng, 3, d)):
            mean, std_error = mean_with_error(np.max(q * t, axis=1))
            self._record_band(
                f"pickands-identity-{index + 1}",
                abs(d * mean - ell(self.model, t)),
                SIGMA_BAND * d * std_error,
                n,
                self._psi_oracle,
            )

    def check_copula(self, rng: RngStream) -> None:
        """Uniform margins, exchangeability and the joint cdf exp(-ℓ(-log u))."""
        d, n = self.config.dim, self.config.n
        u = sample_copula_batch(self.model, d, n, rng)
        for k in range(d):
            _, p_value = ks_uniform(u[:, k])
            self._record_ks(f"copula-margin-u{k + 1}", p_value, n, "closed-form")
        if d >= 3:
            taus = [kendall_tau(u[:, i], u[:, j]) for i in range(d) for j in range(i + 1, d)]
            spread: float = max(taus) - min(taus)
            null_sd: float = math.sqrt(2.0 * (2 * n + 5) / (9.0 * n * (n - 1)))
            self._record_band(
                "copula-exchangeability",
                spread,
                max(2.0 * SIGMA_BAND * null_sd, 0.01),
                n,
                "cross-sampler",
            )
        if not self.model.normalized:
            return
        grid = 0.2 + 0.75 * np.asarray(rng.uniform((20, d)), dtype=float)
        for index, point in enumerate(grid):
            expected: float = math.exp(-ell(self.model, -np.log(point)))
            observed: float = float(np.mean(np.all(u <= point, axis=1)))
            std_error: float = math.sqrt(max(expected * (1.0 - expected), 1.0 / n) / n)
            self._record_band(
                f"copula-cdf-{index + 1}",
                abs(observed - expected),
                SIGMA_BAND * std_error,
                n,
                self._psi_oracle,
            )

    def check_stopping(self, rng: RngStream) -> None:
        if not self.model.normalized:
            return
        d: int = self.config.dim
        draws: int = min(self.config.n, STOPPING_DRAWS)
        _, steps = sample_copula_batch_with_stopping(self.model, d, draws, rng)
        expected: float = expected_stopping(self.model, d)
        deviation: float = abs(float(np.mean(steps)) / expected - 1.0)
        self._record(
            f"stopping-mean-d{d}",
            deviation,
            STOPPING_TOL,
            deviation <= STOPPING_TOL,
            draws,
            "closed-form",
            True,
        )

    def check_minstable(self, rng: RngStream) -> None:
        """min_k Y_k / t_k is exponential with rate ℓ(t)."""
        if not self.model.normalized:
            return
        d, n = self.config.dim, self.config.n
        y = sample_minstable_batch(self.model, d, n, rng)
        for index, t in enumerate(self._random_arguments(rng, 5, d)):
            z_score, passed = exp_rate_test(np.min(y / t, axis=1), ell(self.model, t))
            self._record(
                f"minstable-rate-{index + 1}",
                abs(z_score),
                SIGMA_BAND,
                passed,
                n,
                self._psi_oracle,
                True,
            )

    def check_strong_idt(self, rng: RngStream) -> None:
        """H₁ against the sum of m independent copies of H_{1/m}."""
        sampler = self._path_sampler()
        n: int = self.config.n
        whole = sampler.sample_values(n, rng)
        for m in (2, 4):
            parts = sampler.sample_values(n * m, rng, t=1.0 / m).reshape(n, m).sum(axis=1)
            _, p_value = ks_two_sample(whole, parts)
            self._record_ks(f"strong-idt-m{m}", p_value, n, "cross-sampler")

    def check_duality(self, rng: RngStream) -> None:
        """H₁ of the pair against H₁ of its dual pair."""
        if not is_compound_poisson(self.model):
            return
        effective = IdtPair(
            F=self.model.F,
            L=self.model.L,
            admissible=True,
            certificate=self.model.pair.certificate,
        )
        dual = IdtModel(pair=dual_pair(effective), family_id=f"dual[{self.model.family_id}]")
        n: int = self.config.n
        original = self._path_sampler(SamplerKind.DIRECT).sample_values(n, rng)
        mirrored = self._path_sampler(SamplerKind.DIRECT, model=dual).sample_values(n, rng)
        _, p_value = ks_two_sample(original, mirrored)
        self._record_ks("duality-ks", p_value, n, "cross-sampler")

    def check_cross_sampler(self, rng: RngStream) -> None:
        """Direct against LePage construction of H₁."""
        if not is_compound_poisson(self.model):
            return
        n: int = self.config.n
        direct = self._path_sampler(SamplerKind.DIRECT).sample_values(n, rng)
        lepage = self._path_sampler(SamplerKind.LEPAGE).sample_values(n, rng)
        _, p_value = ks_two_sample(direct, lepage)
        self._record_ks("cross-sampler-ks", p_value, n, "cross-sampler")

    def check_increment(self, rng: RngStream) -> None:
        """Empirical Bernstein function of X₁ in H₂ - H₁ against Ψ₁."""
        if not is_compound_poisson(self.model):
            return
        n: int = self.config.n
        sampler = DirectPathSampler(model=self.model, horizon=2.0, tol=None, logger=self.logger)
        x1, _ = sampler.sample_increments(n, rng, t=1.0, x=1.0)
        alphas = np.array([0.5, 1.0, 2.0])
        estimates = empirical_bernstein(x1, alphas)
        for alpha, (estimate, std_error) in zip(alphas, estimates):
            expected: float = increment_psi1(self.model, 1.0, 1.0, float(alpha))
            self._record_band(
                f"increment-x1-a{alpha:g}",
                abs(estimate - expected),
                SIGMA_BAND * std_error,
                n,
                "quadrature",
            )

    def check_increment_pathwise(self, rng: RngStream) -> None:
        """
        For -log F(s) = (1 - s/u_F)₊, X₂ = (x / (x + t)) (L_{u_F t} - H_t) on
        every path.
        """
        if self.model.family_id != "german-exp" or not self.model.L.levy.finite:
            return
        sampler = DirectPathSampler(model=self.model, horizon=2.0, tol=None, logger=self.logger)
        u: float = self.model.F.right_support
        worst: float = 0.0
        for index in range(PATHWISE_DRAWS):
            path = sampler.sample(rng.substream(index))
            _, x2 = path.increment_parts(1.0, 1.0)
            other: float = 0.5 * (path.driving_sum(u) - float(path(1.0)))
            worst = max(worst, abs(x2 - other))
        self._record(
            "increment-x2-pathwise",
            worst,
            PATHWISE_TOL,
            worst <= PATHWISE_TOL,
            PATHWISE_DRAWS,
            "closed-form",
            False,
        )

    def check_round_trip(self, rng: RngStream) -> None:
        """F ↦ ν_F ↦ F and, with left end point 0, F ↦ ρ_F ↦ F in sup-norm."""
        F: DistributionF = self.model.F
        grid = round_trip_grid(F)
        reference = np.asarray(F(grid), dtype=float)
        trips = [("roundtrip-levy", distribution_from_levy(levy_from_distribution(F)))]
        if F.left_support == 0.0:
            rho: StieltjesMeasure = stieltjes_from_distribution(F)
            trips.append(("roundtrip-stieltjes", distribution_from_stieltjes(rho)))
        for name, back in trips:
            deviation: float = float(np.max(np.abs(np.asarray(back(grid)) - reference)))
            self._record(
                name,
                deviation,
                ROUND_TRIP_TOL,
                deviation <= ROUND_TRIP_TOL,
                grid.size,
                "identity",
                False,
            )


def run_suite(
    model: IdtModel,
    config: VerifyConfig,
    stieltjes: Optional[StieltjesMeasure] = None,
    params: Optional[Mapping[str, float]] = None,
    logger: Optional[ColoredLogger] = None,
) -> VerificationReport:
    """
    Run the checks of `config.suite` that apply to the model.

    Check failures and numerical errors are recorded in the report, never raised.
    """
    suite = VerificationSuite(
        model=model,
        config=config,
        logger=logger or ColoredLogger(name=__name__),
        stieltjes=stieltjes,
        params=params,
    )
    return suite.run()
