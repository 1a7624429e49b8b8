from .catalog import FamilySpec, catalog, family_ids, family_parameters, lookup
from .closed_forms import closed_ell_exp_family, closed_ell_frechet

__all__ = [
    "FamilySpec",
    "catalog",
    "closed_ell_exp_family",
    "closed_ell_frechet",
    "family_ids",
    "family_parameters",
    "lookup",
]
