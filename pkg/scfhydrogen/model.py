"""
SelfConsistentHydrogen: proton + electron eigenstates in their own electrostatic potential.
"""
import logging
from typing import List, Optional, Tuple

from .exceptions import SCFConfigurationError
from .output.run_executor import RunExecutor, RunResult
from .reference.coulomb import ComparisonReport, compare_models
from .scf.config import ScfConfig, validate_config
from .scf.driver import Potential, scf_solve, scf_step, StepResult
from .scf.solution import EigenstateSolution
from .utils.logging import configure_logging

logger = logging.getLogger("scfhydrogen")


class SelfConsistentHydrogen:
    """
    Entry point bundling configuration, the SCF solver and the Coulomb comparison.

    A proton and an electron each occupy one radial state of the potential
    generated by their joint charge density; the converged levels are set
    against the analytic hydrogen spectrum.
    """

    def __init__(self, config: Optional[ScfConfig] = None, log_level: int = logging.INFO) -> None:
        """
        Initialize with a run configuration.

        Args:
            config: Run parameters (defaults to ScfConfig())
            log_level: Level of the package logger
        """
        configure_logging(level=log_level)

        self.config = config or ScfConfig()
        self.solution: Optional[EigenstateSolution] = None

    @classmethod
    def from_file(cls, config_path: str, log_level: int = logging.INFO) -> "SelfConsistentHydrogen":
        """
        Load a flat YAML config file.

        Raises:
            SCFConfigurationError: If the file is missing or does not validate
        """
        config, errors = validate_config(config_path)
        if errors:
            raise SCFConfigurationError(f"invalid configuration {config_path}", errors)
        return cls(config, log_level)

    def validate(self) -> List[Tuple[str, str]]:
        """
        Check the configured value ranges.

        Returns:
            List of (key, message) tuples, empty when the config is usable
        """
        return self.config.validate()

    def step(self, phi_in: Potential) -> StepResult:
        """One unmixed SCF step in phi_in."""
        return scf_step(phi_in, self.config)

    def solve(self, initial: Optional[Potential] = None) -> EigenstateSolution:
        """
        Run the SCF loop to self-consistency and keep the solution.

        Args:
            initial: Starting iterate overriding the configured initial guess

        Returns:
            Converged EigenstateSolution
        """
        self.solution = scf_solve(self.config, initial=initial)
        return self.solution

    def compare(self, n_max: Optional[int] = None) -> ComparisonReport:
        """
        Compare the last solution with Coulomb hydrogen, solving first if needed.

        Args:
            n_max: Number of Coulomb levels (defaults to the configured n_max)

        Returns:
            ComparisonReport
        """
        if self.solution is None:
            self.solve()
        return compare_models(self.solution, n_max or self.config.n_max, self.config.constants)

    @staticmethod
    def run_to_dir(config_path: str, out_dir: str, dry_run: bool = False) -> RunResult:
        """
        Solve a config file end to end and write all artifacts to out_dir.

        Returns:
            RunResult carrying the exit code of the outcome
        """
        return RunExecutor(out_dir).execute(config_path, dry_run=dry_run)
