from .report import write_checks_csv, write_curve_csv, write_json
from .statistics import (
    empirical_bernstein,
    exp_rate_test,
    kendall_tau,
    ks_two_sample,
    ks_uniform,
    mean_with_error,
)
from .suite import VerificationReport, VerificationSuite, round_trip_grid, run_suite

__all__ = [
    "VerificationReport",
    "VerificationSuite",
    "empirical_bernstein",
    "exp_rate_test",
    "kendall_tau",
    "ks_two_sample",
    "ks_uniform",
    "mean_with_error",
    "round_trip_grid",
    "run_suite",
    "write_checks_csv",
    "write_curve_csv",
    "write_json",
]
