"""Report writers: JSON summary, CSV check table and CSV curve table."""

import csv
import json
from typing import TextIO

from src.type_definitions import CurvePoint

from .suite import VerificationReport

CHECK_COLUMNS: tuple[str, ...] = ("check", "statistic", "threshold", "pass", "n", "seed")
CURVE_COLUMNS: tuple[str, ...] = ("x", "theoretical", "empirical", "se")


def write_json(report: VerificationReport, stream: TextIO) -> None:
    json.dump(report.to_dict(), stream, indent=2, sort_keys=True)
    stream.write("\n")


def write_checks_csv(report: VerificationReport, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CHECK_COLUMNS)
    for check in report.checks:
        writer.writerow(
            [
                check.name,
                repr(check.statistic),
                repr(check.threshold),
                "true" if check.passed else "false",
                check.n,
                check.seed,
            ]
        )


def write_curve_csv(curve: list[CurvePoint], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CURVE_COLUMNS)
    for point in curve:
        writer.writerow([repr(value) for value in point])
