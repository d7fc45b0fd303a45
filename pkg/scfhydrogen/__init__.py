__version__ = "0.1.0"

from .model import SelfConsistentHydrogen
from .utils.logging import configure_logging
from .scf.config import ScfConfig, validate_config
from .scf.driver import scf_solve, scf_step
from .scf.solution import EigenstateSolution
from .reference.coulomb import compare_models, coulomb_levels, reduced_mass
from .exceptions import (
    SCFException,
    SCFInputError,
    SCFEnergyError,
    SCFNoBoundStateError,
    SCFConvergenceError,
    SCFConfigurationError,
    SCFStoreError,
)

__all__ = [
    '__version__',
    'SelfConsistentHydrogen',
    'configure_logging',
    'ScfConfig',
    'validate_config',
    'scf_solve',
    'scf_step',
    'EigenstateSolution',
    'compare_models',
    'coulomb_levels',
    'reduced_mass',
    'SCFException',
    'SCFInputError',
    'SCFEnergyError',
    'SCFNoBoundStateError',
    'SCFConvergenceError',
    'SCFConfigurationError',
    'SCFStoreError',
]
