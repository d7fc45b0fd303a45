from .poisson import (
    ChargeDensity,
    particle_density,
    charge_density,
    solve_potential,
    poisson_residual,
    electric_field,
    gauge_constant,
)

__all__ = [
    "ChargeDensity",
    "particle_density",
    "charge_density",
    "solve_potential",
    "poisson_residual",
    "electric_field",
    "gauge_constant",
]
