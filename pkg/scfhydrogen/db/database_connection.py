"""
DuckDB connection handling for the run registry and CSV ingestion.
"""
import logging
from typing import Any, Dict, List, Optional, Tuple

import duckdb
import numpy as np

from ..exceptions import SCFStoreError
from .sql_templates import SQLTemplates

logger = logging.getLogger("scfhydrogen")


class DatabaseConnection:
    """
    Manages a DuckDB connection and SQL execution for scfhydrogen.
    """

    def __init__(self, db_path: str):
        """
        Initialize with database path.

        Args:
            db_path: Path to the DuckDB database file or ":memory:" for in-memory database
        """
        self.db_path = db_path
        self.db = None

    def connect(self) -> "DatabaseConnection":
        """
        Connect to the database.

        Returns:
            Self reference for method chaining
        """
        self.db = duckdb.connect(self.db_path)
        return self

    def close(self) -> None:
        if self.db:
            self.db.close()
            self.db = None

    def execute_sql_safely(
        self,
        sql: str,
        params: Optional[List[Any]] = None,
        description: str = "SQL operation",
        collect_errors: bool = True,
    ) -> Tuple[Optional[duckdb.DuckDBPyRelation], Optional[Tuple[str, str]]]:
        """
        Execute SQL with consistent error handling.

        Args:
            sql: SQL statement to execute
            params: Optional positional parameters
            description: Description of the operation for logging
            collect_errors: Whether to collect errors or raise exceptions

        Returns:
            Tuple of (result, error) where error is None if the statement succeeded

        Raises:
            SCFStoreError: If execution fails and collect_errors is False
        """
        try:
            result = self.db.sql(sql, params=params) if params else self.db.sql(sql)
            return result, None
        except Exception as ex:
            error_msg = f"Error in {description}: {str(ex)}"
            logger.error(error_msg)
            if collect_errors:
                return None, (sql, str(ex))
            raise SCFStoreError(error_msg, sql, ex)

    def fetch_dict(self, sql: str, params: Optional[List[Any]] = None) -> List[Dict[str, Any]]:
        """
        Execute SQL and return rows as dictionaries keyed by column name.

        Raises:
            SCFStoreError: If execution fails
        """
        result, _ = self.execute_sql_safely(sql, params, "Fetch dictionary", False)
        return [dict(zip(result.columns, rec)) for rec in result.fetchall()]

    def read_csv(self, path: str) -> Dict[str, np.ndarray]:
        """
        Read a CSV file with a header row into float arrays keyed by column.

        Args:
            path: CSV file path

        Returns:
            Column name -> values in file order

        Raises:
            SCFStoreError: If DuckDB cannot read the file or a column is not
                fully numeric
        """
        sql = SQLTemplates.READ_CSV.format(path=path.replace("'", "''"))
        result, _ = self.execute_sql_safely(sql, description=f"Read {path}", collect_errors=False)
        columns = {}
        for name, values in result.fetchnumpy().items():
            if np.ma.is_masked(values):
                logger.error(f"Column {name} of {path} has empty cells")
                raise SCFStoreError(f"Column {name} of {path} has empty cells", sql)
            try:
                columns[name] = np.asarray(values, dtype=float)
            except (TypeError, ValueError) as e:
                logger.error(f"Column {name} of {path} is not numeric: {e}")
                raise SCFStoreError(f"Column {name} of {path} is not numeric", sql, e) from e
        return columns

    def __enter__(self) -> "DatabaseConnection":
        return self.connect()

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.close()
