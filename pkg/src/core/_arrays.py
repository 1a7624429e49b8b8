from typing import Callable

import numpy as np

ArrayFn = Callable[[np.ndarray], np.ndarray]


def as_array(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def map_scalar(fn: Callable[[float], float], x) -> np.ndarray:
    """Apply a scalar routine (typically a quadrature) elementwise."""
    values = as_array(x)
    out = np.array([fn(float(v)) for v in values.ravel()], dtype=float)
    return out.reshape(values.shape)


def neg_log(p) -> np.ndarray:
    """-log p with -log 0 = ∞."""
    with np.errstate(divide="ignore"):
        return -np.log(as_array(p))


def zero_times_inf(a, b) -> np.ndarray:
    """Elementwise a·b under the convention 0·∞ = 0."""
    a, b = as_array(a), as_array(b)
    with np.errstate(invalid="ignore"):
        product = a * b
    return np.where((a == 0.0) | (b == 0.0), 0.0, product)
