import math
from datetime import datetime
from unittest.mock import MagicMock

import duckdb
import pytest

from scfhydrogen.db.database_connection import DatabaseConnection
from scfhydrogen.exceptions import SCFStoreError
from scfhydrogen.registry.run_registry import RunRegistry
from scfhydrogen.scf.solution import ResidualRecord


@pytest.fixture
def db():
    with DatabaseConnection(":memory:") as connection:
        yield connection


@pytest.fixture
def registry(db):
    registry = RunRegistry(db)
    assert registry.init_tables() == []
    return registry


@pytest.fixture
def mock_db():
    """Connection whose every statement fails"""
    connection = DatabaseConnection(":memory:")
    connection.db = MagicMock(spec=duckdb.DuckDBPyConnection)
    connection.db.sql.side_effect = duckdb.Error("boom")
    return connection


@pytest.mark.unit
class TestDatabaseConnection:
    """Tests for SQL execution and error collection"""

    def test_execute(self, db):
        result, error = db.execute_sql_safely("SELECT 42 AS answer")
        assert error is None
        assert result.fetchall() == [(42,)]

    def test_params(self, db):
        assert db.fetch_dict("SELECT ? + 1 AS value", params=[1]) == [{"value": 2}]

    def test_collects_errors(self, mock_db):
        result, error = mock_db.execute_sql_safely("SELECT 1", description="Select one")
        assert result is None
        assert error == ("SELECT 1", "boom")

    def test_raises_store_error(self, mock_db):
        with pytest.raises(SCFStoreError) as e:
            mock_db.execute_sql_safely("SELECT 1", collect_errors=False)
        assert e.value.sql == "SELECT 1"

    def test_read_csv(self, db, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("r,phi\n0.5,1.25\n1,0.5\n")
        columns = db.read_csv(str(path))
        assert list(columns) == ["r", "phi"]
        assert columns["r"].tolist() == [0.5, 1.0]
        assert columns["phi"].dtype == float

    def test_read_non_numeric_csv(self, db, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("r,phi\n0.5,abc\n1,def\n")
        with pytest.raises(SCFStoreError, match="phi"):
            db.read_csv(str(path))

    def test_read_missing_csv(self, db, tmp_path):
        with pytest.raises(SCFStoreError):
            db.read_csv(str(tmp_path / "missing.csv"))

    def test_close(self):
        connection = DatabaseConnection(":memory:").connect()
        connection.close()
        assert connection.db is None


@pytest.mark.unit
class TestRunRegistry:
    """Tests for run and iteration bookkeeping"""

    def test_first_run_id(self, registry):
        assert registry.get_next_run_id() == 1

    def test_init_tables_is_idempotent(self, registry):
        assert registry.init_tables() == []

    def test_register_run(self, registry):
        started = datetime(2026, 1, 2, 3, 4, 5)
        registry.register_run(1, "abc", "0.1.0", started, "converged", 12, e_p=-0.96, e_e=-0.46)
        runs = registry.get_runs()
        assert len(runs) == 1
        run = runs[0]
        assert run["run_id"] == 1
        assert run["started_at"] == started
        assert run["iterations"] == 12
        assert run["e_total"] == pytest.approx(-1.42)
        assert run["message"] == ""
        assert registry.get_next_run_id() == 2

    def test_register_failed_run(self, registry):
        registry.register_run(1, "abc", "0.1.0", datetime.now(), "no-bound-state", 0, message="proton: no well")
        run = registry.get_runs()[0]
        assert run["e_p"] is None
        assert run["e_total"] is None
        assert run["message"] == "proton: no well"

    def test_nan_levels_are_null(self, registry):
        registry.register_run(1, "abc", "0.1.0", datetime.now(), "max-iter", 3, e_p=math.nan, e_e=-0.4)
        run = registry.get_runs()[0]
        assert run["e_p"] is None
        assert run["e_e"] == -0.4
        assert run["e_total"] is None

    def test_filter_by_outcome(self, registry):
        registry.register_run(1, "abc", "0.1.0", datetime.now(), "converged", 5, e_p=-0.9, e_e=-0.4)
        registry.register_run(2, "abc", "0.1.0", datetime.now(), "max-iter", 500)
        assert [run["run_id"] for run in registry.get_runs("max-iter")] == [2]
        assert len(registry.get_runs()) == 2

    def test_check_previous_run(self, registry):
        assert registry.check_previous_run("abc") is None
        registry.register_run(1, "abc", "0.1.0", datetime.now(), "converged", 5, e_p=-0.9, e_e=-0.4)
        registry.register_run(2, "abc", "0.1.0", datetime.now(), "converged", 5, e_p=-0.9, e_e=-0.4)
        assert registry.check_previous_run("abc")["run_id"] == 2
        assert registry.check_previous_run("abc", "max-iter") is None
        assert registry.check_previous_run("other") is None

    def test_register_iterations(self, registry):
        history = [
            ResidualRecord(1, 0.5, math.nan, math.nan),
            ResidualRecord(2, 0.1, -1e-3, 2e-3),
        ]
        assert registry.register_iterations(7, history) == []
        rows = registry.get_iterations(7)
        assert [row["iteration"] for row in rows] == [1, 2]
        assert rows[0]["delta_e_p"] is None
        assert rows[1]["delta_e_e"] == 2e-3
        assert registry.get_iterations(8) == []

    def test_errors_are_collected(self, mock_db):
        registry = RunRegistry(mock_db)
        errors = registry.init_tables()
        assert len(errors) == 2
        assert all(message == "boom" for _, message in errors)
        assert len(registry.register_iterations(1, [ResidualRecord(1, 0.5, math.nan, math.nan)])) == 1

    def test_register_run_raises(self, mock_db):
        with pytest.raises(SCFStoreError):
            RunRegistry(mock_db).register_run(1, "abc", "0.1.0", datetime.now(), "converged", 1)
