from .copula import (
    expected_stopping,
    sample_copula,
    sample_copula_batch,
    sample_copula_batch_with_stopping,
    sample_copula_with_stopping,
    sample_minstable,
    sample_minstable_batch,
)
from .pickands import sample_M, sample_Q, sample_Q_batch

__all__ = [
    "expected_stopping",
    "sample_M",
    "sample_Q",
    "sample_Q_batch",
    "sample_copula",
    "sample_copula_batch",
    "sample_copula_batch_with_stopping",
    "sample_copula_with_stopping",
    "sample_minstable",
    "sample_minstable_batch",
]
