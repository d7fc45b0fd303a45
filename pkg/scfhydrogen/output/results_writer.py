"""
CSV/JSON artifacts of a solve and their re-ingestion.
"""
import json
import logging
import os
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..db.database_connection import DatabaseConnection
from ..electrostatics.poisson import solve_potential
from ..grid import RadialFunction, RadialGrid, RadialWeight, integrate_radial
from ..reference.coulomb import ComparisonReport

logger = logging.getLogger("scfhydrogen")

PROFILE_COLUMNS = ("r", "psi_p", "psi_e", "phi", "rho", "e_field")
CONVERGENCE_COLUMNS = ("iteration", "phi_residual", "delta_e_p", "delta_e_e")
FULL_PRECISION = "%.17g"


def _write_csv(path: str, columns: Sequence[str], table: np.ndarray) -> None:
    np.savetxt(
        path,
        table,
        fmt=FULL_PRECISION,
        delimiter=",",
        newline="\n",
        header=",".join(columns),
        comments="",
    )


def profile_norms(grid: RadialGrid, psi_p: np.ndarray, psi_e: np.ndarray, rho: np.ndarray) -> Dict[str, float]:
    """Quadrature norms stored in summary.json and re-checked after a round trip."""
    return {
        "psi_p": integrate_radial(RadialFunction(grid, psi_p**2), RadialWeight.FOUR_PI_R2),
        "psi_e": integrate_radial(RadialFunction(grid, psi_e**2), RadialWeight.FOUR_PI_R2),
        "total_charge": integrate_radial(RadialFunction(grid, rho), RadialWeight.FOUR_PI_R2),
    }


class ResultsWriter:
    """
    Writes profiles.csv, convergence.csv and summary.json into one directory.
    """

    def __init__(self, out_dir: str):
        """
        Initialize with the output directory, created if missing.

        Args:
            out_dir: Directory receiving the artifacts
        """
        self.out_dir = out_dir
        os.makedirs(out_dir, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def write_profiles(self, solution) -> str:
        """
        Write r, psi_p, psi_e, phi, rho, e_field at 17 significant digits.

        Returns:
            Path of profiles.csv
        """
        table = np.column_stack(
            (
                solution.grid.r_values,
                solution.psi_p.psi.values,
                solution.psi_e.psi.values,
                solution.phi.values,
                solution.rho.rho.values,
                solution.e_field.values,
            )
        )
        path = self.path("profiles.csv")
        _write_csv(path, PROFILE_COLUMNS, table)
        logger.info(f"Wrote {path}")
        return path

    def write_convergence(self, history: Sequence[Any]) -> str:
        """
        Write the per-iteration residual history; first-iteration energy changes are nan.

        Returns:
            Path of convergence.csv
        """
        table = np.array(
            [[r.iteration, r.phi_residual, r.delta_e_p, r.delta_e_e] for r in history],
            dtype=float,
        ).reshape(-1, len(CONVERGENCE_COLUMNS))
        path = self.path("convergence.csv")
        _write_csv(path, CONVERGENCE_COLUMNS, table)
        logger.info(f"Wrote {path}")
        return path

    def write_summary(self, summary: Dict[str, Any]) -> str:
        """
        Write summary.json with sorted keys.

        Returns:
            Path of summary.json
        """
        path = self.path("summary.json")
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(summary, f, indent=2, sort_keys=True, allow_nan=False)
            f.write("\n")
        logger.info(f"Wrote {path}")
        return path


def build_summary(
    outcome: str,
    config: Dict[str, Any],
    version: str,
    timestamp: str,
    solution=None,
    report: Optional[ComparisonReport] = None,
    history: Sequence[Any] = (),
    message: str = "",
) -> Dict[str, Any]:
    """
    Assemble the summary.json content of a run.

    Level fields are null when the run produced no solution.
    """
    summary: Dict[str, Any] = {
        "outcome": outcome,
        "message": message,
        "config": config,
        "version": version,
        "timestamp": timestamp,
        "residuals": [record.to_dict() for record in history],
        "iterations": len(history),
        "converged": bool(solution is not None and solution.converged),
        "E_p": None,
        "E_e": None,
        "E_total": None,
        "gauge_constant": None,
        "norms": None,
        "comparison": report.to_dict() if report is not None else None,
    }
    if solution is not None:
        summary.update(
            {
                "E_p": solution.E_p,
                "E_e": solution.E_e,
                "E_total": solution.E_total,
                "iterations": solution.iterations,
                "gauge_constant": solution.gauge,
                "norms": profile_norms(
                    solution.grid,
                    solution.psi_p.psi.values,
                    solution.psi_e.psi.values,
                    solution.rho.rho.values,
                ),
                "self_consistency": float(
                    np.max(np.abs(solve_potential(solution.rho).values - solution.phi.values))
                ),
            }
        )
    return summary


def load_profiles(path: str) -> Dict[str, np.ndarray]:
    """
    Re-ingest a profiles.csv written by ResultsWriter.

    Returns:
        Column name -> values

    Raises:
        SCFStoreError: If DuckDB cannot read the file
    """
    with DatabaseConnection(":memory:") as db:
        return db.read_csv(path)


def load_summary(path: str) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def profile_grid(columns: Dict[str, np.ndarray]) -> RadialGrid:
    """Rebuild the uniform grid of re-ingested profiles from the r column."""
    r = columns["r"]
    return RadialGrid(n_points=r.size, spacing=float(r[0]))
