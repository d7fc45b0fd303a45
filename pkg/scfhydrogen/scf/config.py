"""
Run configuration for the self-consistent field driver.
"""
import hashlib
import json
import logging
import math
import os
from dataclasses import asdict, dataclass, fields, replace
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Tuple

import yaml

from ..exceptions import SCFConfigurationError
from ..grid import PhysicalConstants, RadialGrid
from ..grid.constants import PROTON_ELECTRON_MASS_RATIO

logger = logging.getLogger("scfhydrogen")

INITIAL_GUESSES = ("hydrogenic", "uniform-ball", "user")
MIXERS = ("linear", "anderson")

_FLOAT_KEYS = (
    "mass_p",
    "grid_spacing",
    "r_max",
    "mixing",
    "tol_phi",
    "tol_energy",
    "ball_radius_p",
    "ball_radius_e",
    "energy_ceiling",
)
_INT_KEYS = ("node_p", "node_e", "anderson_history", "max_iter", "eigen_max_iter", "n_max")
_CHOICE_KEYS = {"initial_guess": INITIAL_GUESSES, "mixer": MIXERS}
_OPTIONAL_FLOAT_KEYS = ("energy_floor",)
_OPTIONAL_STR_KEYS = ("initial_potential_file",)
_BOOL_KEYS = ("self_interaction",)


@dataclass(frozen=True)
class ScfConfig:
    """
    Flat, typed run parameters; every field has the documented default.
    """

    mass_p: float = PROTON_ELECTRON_MASS_RATIO
    grid_spacing: float = 2e-3
    r_max: float = 40.0
    node_p: int = 0
    node_e: int = 0
    mixing: float = 0.3
    mixer: str = "linear"
    anderson_history: int = 5
    tol_phi: float = 1e-8
    tol_energy: float = 1e-9
    max_iter: int = 500
    eigen_max_iter: int = 200
    initial_guess: str = "hydrogenic"
    initial_potential_file: Optional[str] = None
    ball_radius_p: float = 1e-3
    ball_radius_e: float = 1.0
    energy_floor: Optional[float] = None
    energy_ceiling: float = -1e-6
    self_interaction: bool = True
    n_max: int = 3

    @cached_property
    def constants(self) -> PhysicalConstants:
        return PhysicalConstants(mass_p=self.mass_p)

    @cached_property
    def grid(self) -> RadialGrid:
        return RadialGrid.from_extent(self.grid_spacing, self.r_max)

    @classmethod
    def from_mapping(cls, mapping: Optional[Mapping[str, Any]]) -> "ScfConfig":
        """
        Build a config from flat keys, filling defaults for missing ones.

        Args:
            mapping: Parsed config file content (None for an empty file)

        Returns:
            ScfConfig with types checked; ranges are checked by validate()

        Raises:
            SCFConfigurationError: For unknown keys or values of the wrong type
        """
        mapping = dict(mapping or {})
        known = {f.name for f in fields(cls)}
        errors: List[Tuple[str, str]] = []
        values: Dict[str, Any] = {}

        for key in sorted(mapping):
            if key not in known:
                errors.append((key, "unknown key"))
                continue
            value = _coerce_number(key, mapping[key])
            error = _type_error(key, value)
            if error:
                errors.append((key, error))
            elif key in _FLOAT_KEYS or (key in _OPTIONAL_FLOAT_KEYS and value is not None):
                values[key] = float(value)
            else:
                values[key] = value

        if errors:
            for key, message in errors:
                logger.error(f"Config {key}: {message}")
            raise SCFConfigurationError("invalid configuration", errors)
        return cls(**values)

    def validate(self) -> List[Tuple[str, str]]:
        """
        Check value ranges.

        Returns:
            List of (key, message) tuples, empty when the config is usable
        """
        errors: List[Tuple[str, str]] = []

        def check(condition: bool, key: str, message: str) -> None:
            if not condition:
                errors.append((key, message))

        for key in _FLOAT_KEYS + _OPTIONAL_FLOAT_KEYS:
            value = getattr(self, key)
            if value is not None:
                check(math.isfinite(value), key, f"{key} must be finite")
        check(self.mass_p > 1.0, "mass_p", "mass_p must exceed the electron mass (1)")
        check(self.grid_spacing > 0.0, "grid_spacing", "grid_spacing must be positive")
        check(self.r_max > 0.0, "r_max", "r_max must be positive")
        if 0.0 < self.grid_spacing < math.inf and 0.0 < self.r_max < math.inf:
            span = self.r_max / self.grid_spacing
            check(math.isfinite(span), "grid_spacing", "grid_spacing is too small for r_max")
            check(
                not math.isfinite(span) or round(span) >= 5,
                "r_max",
                "r_max must span at least 5 grid points",
            )
        check(self.node_p >= 0, "node_p", "node_p must be non-negative")
        check(self.node_e >= 0, "node_e", "node_e must be non-negative")
        check(0.0 < self.mixing <= 1.0, "mixing", "mixing must be in (0,1]")
        check(self.anderson_history >= 1, "anderson_history", "anderson_history must be at least 1")
        check(self.tol_phi > 0.0, "tol_phi", "tol_phi must be positive")
        check(self.tol_energy > 0.0, "tol_energy", "tol_energy must be positive")
        check(self.max_iter >= 1, "max_iter", "max_iter must be at least 1")
        check(self.eigen_max_iter >= 1, "eigen_max_iter", "eigen_max_iter must be at least 1")
        check(self.ball_radius_p > 0.0, "ball_radius_p", "ball_radius_p must be positive")
        check(self.ball_radius_e > 0.0, "ball_radius_e", "ball_radius_e must be positive")
        check(self.energy_ceiling < 0.0, "energy_ceiling", "energy_ceiling must be negative")
        check(self.n_max >= 1, "n_max", "n_max must be at least 1")
        if self.initial_guess == "user":
            check(
                bool(self.initial_potential_file),
                "initial_potential_file",
                "initial_potential_file is required when initial_guess is 'user'",
            )

        for key, message in errors:
            logger.error(f"Config {key}: {message}")
        return errors

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON echo, used to spot identical runs."""
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _coerce_number(key: str, value: Any) -> Any:
    # YAML 1.1 reads exponent literals such as 1e-3 as strings
    if isinstance(value, str) and (key in _FLOAT_KEYS or key in _OPTIONAL_FLOAT_KEYS):
        try:
            return float(value)
        except ValueError:
            return value
    return value


def _type_error(key: str, value: Any) -> Optional[str]:
    is_number = isinstance(value, (int, float)) and not isinstance(value, bool)
    if key in _FLOAT_KEYS and not is_number:
        return f"{key} must be a number, got {value!r}"
    if key in _OPTIONAL_FLOAT_KEYS and value is not None and not is_number:
        return f"{key} must be a number or null, got {value!r}"
    if key in _INT_KEYS and not (isinstance(value, int) and not isinstance(value, bool)):
        return f"{key} must be an integer, got {value!r}"
    if key in _CHOICE_KEYS and value not in _CHOICE_KEYS[key]:
        return f"{key} must be one of {', '.join(_CHOICE_KEYS[key])}, got {value!r}"
    if key in _OPTIONAL_STR_KEYS and value is not None and not isinstance(value, str):
        return f"{key} must be a path, got {value!r}"
    if key in _BOOL_KEYS and not isinstance(value, bool):
        return f"{key} must be true or false, got {value!r}"
    return None


def validate_config(path: str) -> Tuple[Optional[ScfConfig], List[Tuple[str, str]]]:
    """
    Read and check a flat YAML config file.

    Args:
        path: Config file path

    Returns:
        (config, []) when valid, otherwise (None, list of (key, message))
    """
    if not os.path.isfile(path):
        logger.error(f"Config file not found: {path}")
        return None, [("path", f"config file not found: {path}")]
    try:
        with open(path, encoding="utf-8") as f:
            mapping = yaml.safe_load(f)
    except yaml.YAMLError as e:
        logger.error(f"Config file {path} is not valid YAML: {e}")
        return None, [("path", f"{path} is not valid YAML: {e}")]
    if mapping is not None and not isinstance(mapping, dict):
        return None, [("path", f"{path} must contain a flat key-value mapping")]

    try:
        config = ScfConfig.from_mapping(mapping)
    except SCFConfigurationError as e:
        return None, e.errors
    errors = config.validate()
    if config.initial_guess == "user" and config.initial_potential_file:
        potential_file = config.initial_potential_file
        if not os.path.isabs(potential_file):
            potential_file = os.path.join(os.path.dirname(os.path.abspath(path)), potential_file)
            config = replace(config, initial_potential_file=potential_file)
        if not os.path.isfile(potential_file):
            errors.append(("initial_potential_file", f"file not found: {potential_file}"))
    if errors:
        return None, errors
    return config, []
