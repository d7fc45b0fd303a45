import json
import os

import numpy as np
import pytest
import yaml

from scfhydrogen import __version__
from scfhydrogen.cli import build_parser, main
from scfhydrogen.db.database_connection import DatabaseConnection
from scfhydrogen.output.results_writer import load_profiles, load_summary, profile_grid, profile_norms
from scfhydrogen.registry.run_registry import RunRegistry

CONVERGING = {
    "self_interaction": False,
    "grid_spacing": 0.01,
    "r_max": 20.0,
    "mixing": 0.5,
    "tol_phi": 1.0e-8,
    "tol_energy": 1.0e-7,
}


def write_config(path, mapping) -> str:
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(mapping, f)
    return str(path)


@pytest.fixture(scope="module")
def converged_run(tmp_path_factory):
    base = tmp_path_factory.mktemp("converged")
    config_path = write_config(base / "run.yaml", CONVERGING)
    out_dir = base / "out"
    exit_code = main(["solve", config_path, "--out", str(out_dir), "--quiet"])
    return exit_code, config_path, out_dir


@pytest.mark.unit
class TestParser:
    """Tests for the argument parser"""

    def test_solve_defaults(self):
        args = build_parser().parse_args(["solve", "run.yaml"])
        assert args.command == "solve"
        assert args.out == "results"
        assert args.dry_run is False

    def test_oracle(self):
        args = build_parser().parse_args(["oracle", "coulomb", "--n", "2"])
        assert args.kind == "coulomb"
        assert args.n == 2
        assert args.mass == 1.0

    def test_command_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_version(self, capsys):
        with pytest.raises(SystemExit):
            main(["--version"])
        assert __version__ in capsys.readouterr().out


@pytest.mark.unit
class TestSolveCommand:
    """Tests for the solve subcommand outcomes"""

    def test_missing_config(self, tmp_path, capsys):
        missing = str(tmp_path / "missing.yaml")
        assert main(["solve", missing, "--out", str(tmp_path / "out"), "--quiet"]) == 4
        assert missing in capsys.readouterr().err
        assert not os.path.exists(tmp_path / "out")

    def test_invalid_config(self, tmp_path, capsys):
        config_path = write_config(tmp_path / "run.yaml", {"mixing": 0.0, "colour": "red"})
        assert main(["solve", config_path, "--out", str(tmp_path / "out"), "--quiet"]) == 4
        assert "colour: unknown key" in capsys.readouterr().err

    def test_infinite_extent(self, tmp_path, capsys):
        config_path = write_config(tmp_path / "run.yaml", {"r_max": float("inf")})
        assert main(["solve", config_path, "--out", str(tmp_path / "out"), "--quiet"]) == 4
        assert "r_max: r_max must be finite" in capsys.readouterr().err

    def test_unreadable_initial_potential(self, tmp_path, capsys):
        (tmp_path / "phi.csv").write_text("r,phi\n0.01,abc\n0.02,def\n")
        config_path = write_config(
            tmp_path / "run.yaml",
            {**CONVERGING, "self_interaction": True, "initial_guess": "user", "initial_potential_file": "phi.csv"},
        )
        assert main(["solve", config_path, "--out", str(tmp_path / "out"), "--quiet"]) == 4
        err = capsys.readouterr().err
        assert "bad-input" in err
        assert "not numeric" in err

    def test_dry_run(self, tmp_path, capsys):
        config_path = write_config(tmp_path / "run.yaml", {"grid_spacing": 0.01, "r_max": 20.0})
        out_dir = tmp_path / "out"
        assert main(["solve", config_path, "--out", str(out_dir), "--dry-run", "--quiet"]) == 0
        described = json.loads(capsys.readouterr().out)
        assert described["grid"]["n_points"] == 2000
        assert described["config"]["self_interaction"] is True
        assert described["units"]["energy"] == "hartree"
        assert not os.path.exists(out_dir)

    def test_self_interaction_reports_no_bound_state(self, tmp_path, capsys):
        config_path = write_config(tmp_path / "run.yaml", {"grid_spacing": 0.01, "r_max": 20.0})
        out_dir = tmp_path / "out"
        assert main(["solve", config_path, "--out", str(out_dir), "--quiet"]) == 2
        assert "no-bound-state" in capsys.readouterr().err

        summary = load_summary(str(out_dir / "summary.json"))
        assert summary["outcome"] == "no-bound-state"
        assert summary["E_p"] is None
        assert summary["converged"] is False
        assert summary["message"].startswith("both")
        assert "electron" in summary["message"]
        assert not os.path.exists(out_dir / "profiles.csv")
        assert os.path.exists(out_dir / "convergence.csv")

        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert manifest["outcome"] == "no-bound-state"
        assert "profiles.csv" not in manifest["files"]

    def test_iteration_cap(self, tmp_path):
        config_path = write_config(tmp_path / "run.yaml", {**CONVERGING, "max_iter": 1})
        out_dir = tmp_path / "out"
        assert main(["solve", config_path, "--out", str(out_dir), "--quiet"]) == 3
        summary = load_summary(str(out_dir / "summary.json"))
        assert summary["outcome"] == "max-iter"
        assert summary["converged"] is False
        assert summary["comparison"] is None
        assert summary["E_p"] is not None
        assert os.path.exists(out_dir / "profiles.csv")


@pytest.mark.integration
class TestConvergedRun:
    """Tests for the artifacts of a converged solve"""

    def test_exit_code(self, converged_run):
        exit_code, _, _ = converged_run
        assert exit_code == 0

    def test_summary(self, converged_run):
        _, _, out_dir = converged_run
        summary = load_summary(str(out_dir / "summary.json"))
        assert summary["outcome"] == "converged"
        assert summary["converged"] is True
        assert summary["E_total"] == pytest.approx(summary["E_p"] + summary["E_e"], abs=1e-12)
        assert -1.0 < summary["E_p"] < -0.9
        assert -0.5 < summary["E_e"] < -0.4
        assert summary["self_consistency"] <= 2.0 * CONVERGING["tol_phi"]
        assert summary["residuals"][0]["delta_e_p"] is None
        assert len(summary["comparison"]["rows"]) == 3

    def test_profiles_round_trip(self, converged_run):
        _, _, out_dir = converged_run
        summary = load_summary(str(out_dir / "summary.json"))
        columns = load_profiles(str(out_dir / "profiles.csv"))
        assert list(columns) == ["r", "psi_p", "psi_e", "phi", "rho", "e_field"]
        grid = profile_grid(columns)
        assert grid.n_points == 2000
        norms = profile_norms(grid, columns["psi_p"], columns["psi_e"], columns["rho"])
        for key, value in summary["norms"].items():
            assert norms[key] == pytest.approx(value, abs=1e-10)
        assert norms["psi_p"] == pytest.approx(1.0, abs=1e-8)

    def test_convergence_csv(self, converged_run):
        _, _, out_dir = converged_run
        summary = load_summary(str(out_dir / "summary.json"))
        with DatabaseConnection(":memory:") as db:
            history = db.read_csv(str(out_dir / "convergence.csv"))
        assert history["iteration"].size == summary["iterations"]
        assert np.isnan(history["delta_e_p"][0])
        assert history["phi_residual"][-1] < CONVERGING["tol_phi"]

    def test_manifest(self, converged_run):
        _, config_path, out_dir = converged_run
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert manifest["outcome"] == "converged"
        assert manifest["version"] == __version__
        assert set(manifest["files"]) == {"profiles.csv", "convergence.csv", "summary.json", "runs.duckdb"}
        assert manifest["config"]["grid_spacing"] == 0.01
        assert len(manifest["input_hash"]) == 64

    def test_registry(self, converged_run):
        _, _, out_dir = converged_run
        with DatabaseConnection(str(out_dir / "runs.duckdb")) as db:
            registry = RunRegistry(db)
            runs = registry.get_runs()
            assert len(runs) == 1
            assert runs[0]["outcome"] == "converged"
            iterations = registry.get_iterations(runs[0]["run_id"])
        summary = load_summary(str(out_dir / "summary.json"))
        assert runs[0]["e_total"] == pytest.approx(summary["E_total"])
        assert len(iterations) == summary["iterations"]

    def test_deterministic(self, converged_run, tmp_path):
        _, config_path, out_dir = converged_run
        again = tmp_path / "again"
        assert main(["solve", config_path, "--out", str(again), "--quiet"]) == 0
        assert (again / "profiles.csv").read_bytes() == (out_dir / "profiles.csv").read_bytes()
        assert (again / "convergence.csv").read_bytes() == (out_dir / "convergence.csv").read_bytes()
        first = load_summary(str(out_dir / "summary.json"))
        second = load_summary(str(again / "summary.json"))
        first.pop("timestamp")
        second.pop("timestamp")
        assert first == second

    def test_compare(self, converged_run, capsys):
        _, _, out_dir = converged_run
        capsys.readouterr()
        assert main(["compare", str(out_dir / "summary.json"), "--nmax", "2"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert len(report["rows"]) == 2
        assert report["rows"][0]["n"] == 1
        assert report["levels_non_positive"] is True
        assert report["moments"]["mean_r"] is not None


@pytest.mark.unit
class TestCompareAndOracle:
    """Tests for the compare and oracle subcommands"""

    def test_compare_without_levels(self, tmp_path, capsys):
        path = tmp_path / "summary.json"
        path.write_text(json.dumps({"outcome": "no-bound-state", "E_p": None, "E_e": None}))
        assert main(["compare", str(path)]) == 4
        assert "no levels" in capsys.readouterr().err

    @pytest.mark.parametrize("payload", [[1, 2], "summary", 3.5])
    def test_compare_not_an_object(self, tmp_path, capsys, payload):
        path = tmp_path / "summary.json"
        path.write_text(json.dumps(payload))
        assert main(["compare", str(path)]) == 4
        assert "not a run summary" in capsys.readouterr().err

    def test_compare_non_numeric_level(self, tmp_path, capsys):
        path = tmp_path / "summary.json"
        path.write_text(json.dumps({"E_p": "low", "E_e": -0.4, "config": [1], "comparison": "none"}))
        assert main(["compare", str(path)]) == 4
        assert capsys.readouterr().err.startswith("scfhydrogen:")

    def test_compare_missing_file(self, tmp_path):
        assert main(["compare", str(tmp_path / "summary.json")]) == 4

    def test_compare_bad_nmax(self, tmp_path):
        path = tmp_path / "summary.json"
        path.write_text(json.dumps({"E_p": -0.9, "E_e": -0.4}))
        assert main(["compare", str(path), "--nmax", "0"]) == 4

    def test_oracle(self, capsys):
        assert main(["oracle", "coulomb", "--n", "2"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == {"n": 2, "mass": 1.0, "energy": -0.125}

    def test_oracle_reduced_mass(self, capsys):
        assert main(["oracle", "coulomb", "--n", "1", "--mass", "0.5"]) == 0
        assert json.loads(capsys.readouterr().out)["energy"] == -0.25

    @pytest.mark.parametrize("argv", [["--n", "0"], ["--n", "1", "--mass", "0"], ["--n", "1", "--mass", "-1"]])
    def test_oracle_bad_input(self, argv, capsys):
        assert main(["oracle", "coulomb", *argv]) == 4
        assert capsys.readouterr().err.startswith("scfhydrogen:")
