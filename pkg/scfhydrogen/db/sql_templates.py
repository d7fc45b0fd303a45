"""
SQL templates for the scfhydrogen run registry.
"""


class SQLTemplates:
    """Centralized storage for SQL templates"""

    RUNS_TABLE = """
    CREATE TABLE IF NOT EXISTS runs
    (
        run_id INTEGER,
        config_hash VARCHAR,
        version VARCHAR,
        started_at TIMESTAMP,
        finished_at TIMESTAMP,
        outcome VARCHAR,
        iterations INTEGER,
        e_p DOUBLE,
        e_e DOUBLE,
        e_total DOUBLE,
        message VARCHAR
    );
    """

    ITERATIONS_TABLE = """
    CREATE TABLE IF NOT EXISTS iterations
    (
        run_id INTEGER,
        iteration INTEGER,
        phi_residual DOUBLE,
        delta_e_p DOUBLE,
        delta_e_e DOUBLE
    );
    """

    GET_RUN_ID = """
    SELECT
        COALESCE(MAX(run_id), 0) + 1 AS run_id
    FROM runs
    """

    CHECK_PREVIOUS_RUN = """
    SELECT
        run_id, finished_at
    FROM runs
    WHERE config_hash = ?
    AND outcome = ?
    ORDER BY run_id DESC
    LIMIT 1
    """

    INSERT_RUN = """
    INSERT INTO runs
    VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
    """

    INSERT_ITERATION = """
    INSERT INTO iterations
    VALUES (?, ?, ?, ?, ?)
    """

    GET_RUNS = """
    SELECT
        run_id, config_hash, version, started_at, finished_at,
        outcome, iterations, e_p, e_e, e_total, message
    FROM runs
    {where_clause}
    ORDER BY run_id
    """

    GET_ITERATIONS = """
    SELECT
        iteration, phi_residual, delta_e_p, delta_e_e
    FROM iterations
    WHERE run_id = ?
    ORDER BY iteration
    """

    READ_CSV = "SELECT * FROM read_csv('{path}', header = true, delim = ',')"
