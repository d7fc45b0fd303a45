"""
Run bookkeeping for scfhydrogen solves.
"""
import logging
import math
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..db.database_connection import DatabaseConnection
from ..db.sql_templates import SQLTemplates

logger = logging.getLogger("scfhydrogen")


def _nullable(value: Optional[float]) -> Optional[float]:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return float(value)


class RunRegistry:
    """
    Records every solve and its convergence history in DuckDB tables.
    """

    def __init__(self, db: DatabaseConnection):
        """
        Initialize with database connection.

        Args:
            db: Connected database
        """
        self.db = db

    def init_tables(self, verbose: bool = False) -> List[Tuple[str, str]]:
        """
        Create the runs and iterations tables if they don't exist.

        Args:
            verbose: Whether to print the DDL

        Returns:
            List of (SQL, error) tuples if errors occurred, otherwise empty list
        """
        errors = []
        for sql, description in (
            (SQLTemplates.RUNS_TABLE, "Create runs"),
            (SQLTemplates.ITERATIONS_TABLE, "Create iterations"),
        ):
            if verbose:
                print(sql)
            _, error = self.db.execute_sql_safely(sql, description=description)
            if error:
                errors.append(error)
        return errors

    def get_next_run_id(self) -> int:
        result = self.db.fetch_dict(SQLTemplates.GET_RUN_ID)
        return result[0]["run_id"]

    def check_previous_run(self, config_hash: str, outcome: str = "converged") -> Optional[Dict[str, Any]]:
        """
        Look up the latest run of an identical configuration with the given outcome.

        Args:
            config_hash: SHA-256 of the canonical config echo
            outcome: Outcome to look for

        Returns:
            Row with run_id and finished_at, or None
        """
        result = self.db.fetch_dict(SQLTemplates.CHECK_PREVIOUS_RUN, params=[config_hash, outcome])
        return result[0] if result else None

    def register_run(
        self,
        run_id: int,
        config_hash: str,
        version: str,
        started_at: datetime,
        outcome: str,
        iterations: int,
        e_p: Optional[float] = None,
        e_e: Optional[float] = None,
        message: str = "",
    ) -> None:
        """
        Insert one row into the runs table.

        Args:
            run_id: Run ID from get_next_run_id
            config_hash: SHA-256 of the config echo
            version: Package version
            started_at: Start time of the solve
            outcome: converged, no-bound-state, max-iter or bad-input
            iterations: Number of SCF iterations performed
            e_p: Proton level, if any
            e_e: Electron level, if any
            message: Optional failure message
        """
        e_p, e_e = _nullable(e_p), _nullable(e_e)
        e_total = e_p + e_e if e_p is not None and e_e is not None else None
        self.db.execute_sql_safely(
            SQLTemplates.INSERT_RUN,
            params=[
                run_id,
                config_hash,
                version,
                started_at,
                datetime.now(),
                outcome,
                iterations,
                e_p,
                e_e,
                e_total,
                message,
            ],
            description=f"Register run {run_id}",
            collect_errors=False,
        )
        logger.info(f"Registered run {run_id} ({outcome})")

    def register_iterations(self, run_id: int, history: Sequence[Any]) -> List[Tuple[str, str]]:
        """
        Insert the residual history of a run.

        Args:
            run_id: Run ID
            history: ResidualRecord sequence

        Returns:
            List of (SQL, error) tuples if errors occurred, otherwise empty list
        """
        errors = []
        for record in history:
            _, error = self.db.execute_sql_safely(
                SQLTemplates.INSERT_ITERATION,
                params=[
                    run_id,
                    record.iteration,
                    record.phi_residual,
                    _nullable(record.delta_e_p),
                    _nullable(record.delta_e_e),
                ],
                description=f"Register iteration {record.iteration} of run {run_id}",
            )
            if error:
                errors.append(error)
        return errors

    def get_runs(self, outcome: Optional[str] = None) -> List[Dict[str, Any]]:
        """
        Retrieve registered runs, optionally filtered by outcome.
        """
        params = []
        where_clause = ""
        if outcome:
            where_clause = "WHERE outcome = ?"
            params.append(outcome)
        sql = SQLTemplates.GET_RUNS.format(where_clause=where_clause)
        return self.db.fetch_dict(sql=sql, params=params)

    def get_iterations(self, run_id: int) -> List[Dict[str, Any]]:
        return self.db.fetch_dict(SQLTemplates.GET_ITERATIONS, params=[run_id])
