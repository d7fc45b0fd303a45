"""
Physical constants in Hartree atomic units.
"""
from dataclasses import dataclass

from ..exceptions import SCFInputError

PROTON_ELECTRON_MASS_RATIO = 1836.15267343


@dataclass(frozen=True)
class PhysicalConstants:
    """
    Constants of the two-particle model in Hartree atomic units (hbar = e = m_e = 1).

    Energies come out in Hartree and lengths in Bohr radii; the radial equations
    keep their Gaussian-units form under this choice.
    """

    hbar: float = 1.0
    charge_e: float = 1.0
    mass_e: float = 1.0
    mass_p: float = PROTON_ELECTRON_MASS_RATIO

    def __post_init__(self) -> None:
        for name in ("hbar", "charge_e", "mass_e", "mass_p"):
            if not getattr(self, name) > 0:
                raise SCFInputError(f"{name} must be strictly positive, got {getattr(self, name)}")
        if not self.mass_p > self.mass_e:
            raise SCFInputError(
                f"mass_p must exceed mass_e, got mass_p={self.mass_p} mass_e={self.mass_e}"
            )
