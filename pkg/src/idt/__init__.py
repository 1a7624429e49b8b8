from .model import (
    ADMISSIBILITY_CAP,
    IdtModel,
    IdtPair,
    check_admissible,
    dual_pair,
    ell,
    has_killing,
    increment_psi1,
    is_compound_poisson,
    normalize,
    psi_H,
)

__all__ = [
    "ADMISSIBILITY_CAP",
    "IdtModel",
    "IdtPair",
    "check_admissible",
    "dual_pair",
    "ell",
    "has_killing",
    "increment_psi1",
    "is_compound_poisson",
    "normalize",
    "psi_H",
]
