"""
End-to-end execution of one solve: config, SCF, comparison, artifacts, registry.
"""
import hashlib
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple

from .. import __version__
from ..db.database_connection import DatabaseConnection
from ..exceptions import (
    SCFConvergenceError,
    SCFInputError,
    SCFNoBoundStateError,
)
from ..reference.coulomb import compare_models
from ..registry.run_registry import RunRegistry
from ..scf.config import ScfConfig, validate_config
from ..scf.driver import scf_solve
from .results_writer import ResultsWriter, build_summary

logger = logging.getLogger("scfhydrogen")

EXIT_CONVERGED = 0
EXIT_NO_BOUND_STATE = 2
EXIT_MAX_ITER = 3
EXIT_BAD_INPUT = 4

EXIT_CODES = {
    "converged": EXIT_CONVERGED,
    "no-bound-state": EXIT_NO_BOUND_STATE,
    "max-iter": EXIT_MAX_ITER,
    "bad-input": EXIT_BAD_INPUT,
}

REGISTRY_FILE = "runs.duckdb"


@dataclass
class RunManifest:
    """
    Record of one run: config echo, version, timestamp, input hash, outcome, files.
    """

    config: Dict[str, Any]
    version: str
    timestamp: str
    input_hash: str
    outcome: str
    files: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def write(self, path: str) -> str:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
        return path


@dataclass
class RunResult:
    exit_code: int
    outcome: str
    message: str = ""
    manifest: Optional[RunManifest] = None


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def describe_config(config: ScfConfig) -> Dict[str, Any]:
    """Resolved parameters printed by --dry-run."""
    grid = config.grid
    return {
        "config": config.to_dict(),
        "grid": {"n_points": grid.n_points, "spacing": grid.spacing, "r_max": grid.r_max},
        "units": {"energy": "hartree", "length": "bohr", "mass": "electron mass", "charge": "elementary charge"},
    }


class RunExecutor:
    """
    Orchestrates a complete solve and writes its artifacts to one directory.
    """

    def __init__(self, out_dir: str, version: str = __version__):
        """
        Initialize with the output directory.

        Args:
            out_dir: Directory receiving profiles, summary, convergence, manifest and registry
            version: Version string recorded with the run
        """
        self.out_dir = out_dir
        self.version = version

    def execute(self, config_path: str, dry_run: bool = False) -> RunResult:
        """
        Validate the config and, unless dry_run, solve and persist the results.

        Args:
            config_path: Flat YAML config file
            dry_run: Only validate and describe the run; nothing is written

        Returns:
            RunResult with the exit code of the outcome
        """
        config, errors = validate_config(config_path)
        if errors:
            message = "\n".join(f"{key}: {msg}" for key, msg in errors)
            return RunResult(EXIT_BAD_INPUT, "bad-input", message)
        if dry_run:
            print(json.dumps(describe_config(config), indent=2, sort_keys=True))
            return RunResult(EXIT_CONVERGED, "dry-run")

        started_at = datetime.now()
        timestamp = started_at.isoformat(timespec="seconds")
        writer = ResultsWriter(self.out_dir)
        solution, history, outcome, message = self._solve(config)

        files = []
        report = None
        if solution is not None:
            if solution.converged:
                report = compare_models(solution, config.n_max, config.constants)
            files.append(writer.write_profiles(solution))
        files.append(writer.write_convergence(history))
        summary = build_summary(
            outcome,
            config.to_dict(),
            self.version,
            timestamp,
            solution=solution,
            report=report,
            history=history,
            message=message,
        )
        files.append(writer.write_summary(summary))

        registry_path = writer.path(REGISTRY_FILE)
        self._register(registry_path, config, started_at, outcome, solution, history, message)
        files.append(registry_path)

        manifest = RunManifest(
            config=config.to_dict(),
            version=self.version,
            timestamp=timestamp,
            input_hash=file_sha256(config_path),
            outcome=outcome,
            files=[os.path.basename(f) for f in files],
        )
        manifest.write(writer.path("manifest.json"))
        logger.info(f"Run finished: {outcome}")
        return RunResult(EXIT_CODES[outcome], outcome, message, manifest)

    def _solve(self, config: ScfConfig) -> Tuple[Any, List[Any], str, str]:
        try:
            solution = scf_solve(config)
            return solution, list(solution.residual_history), "converged", ""
        except SCFNoBoundStateError as e:
            return None, list(e.residual_history), "no-bound-state", str(e)
        except SCFConvergenceError as e:
            if e.bracket is not None:
                # eigensolver cap, not the SCF loop
                return None, list(e.residual_history), "max-iter", str(e)
            return e.last_solution, list(e.residual_history), "max-iter", str(e)
        except SCFInputError as e:
            return None, [], "bad-input", str(e)

    def _register(
        self,
        registry_path: str,
        config: ScfConfig,
        started_at: datetime,
        outcome: str,
        solution,
        history: List[Any],
        message: str,
    ) -> None:
        try:
            with DatabaseConnection(registry_path) as db:
                registry = RunRegistry(db)
                for sql, error in registry.init_tables():
                    logger.warning(f"Registry bootstrap failed: {error}")
                config_hash = config.config_hash()
                previous = registry.check_previous_run(config_hash, outcome)
                if previous:
                    logger.info(
                        f"Identical configuration already finished as {outcome} in run {previous['run_id']}"
                    )
                run_id = registry.get_next_run_id()
                registry.register_run(
                    run_id,
                    config_hash,
                    self.version,
                    started_at,
                    outcome,
                    len(history),
                    e_p=solution.E_p if solution is not None else None,
                    e_e=solution.E_e if solution is not None else None,
                    message=message,
                )
                for sql, error in registry.register_iterations(run_id, history):
                    logger.warning(f"Iteration record failed: {error}")
        except Exception as ex:
            logger.error(f"Run registry unavailable: {ex}")
