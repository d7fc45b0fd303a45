from .coulomb import (
    CoulombLevel,
    ComparisonReport,
    reduced_mass,
    coulomb_levels,
    compare_levels,
    compare_models,
)

__all__ = [
    "CoulombLevel",
    "ComparisonReport",
    "reduced_mass",
    "coulomb_levels",
    "compare_levels",
    "compare_models",
]
