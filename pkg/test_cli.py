"""
Command-line tests run through click's CliRunner against a temporary cache
"""

import json

import pytest
from click.testing import CliRunner

import config
from core import solve_pipeline
from core.app import create_cli


@pytest.fixture
def cli():
    return create_cli()


@pytest.fixture
def runner(isolated_storage, monkeypatch):
    monkeypatch.setattr(config, "WORKERS", 1)
    return CliRunner(mix_stderr=False)


def test_version(runner, cli):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert config.APP_VERSION in result.output


def test_list_rings(runner, cli):
    result = runner.invoke(cli, ["list-rings"])
    assert result.exit_code == 0
    assert "fibonacci" in result.output
    assert "su2-4" in result.output

    rows = json.loads(runner.invoke(cli, ["list-rings", "--json"]).output)
    fib = next(row for row in rows if row["name"] == "fibonacci")
    assert fib["sextuples"] == 5
    assert fib["field"] == "Q(zeta_10)"


def test_solve_then_check(runner, cli, tmp_path):
    output = tmp_path / "fib.json"
    result = runner.invoke(cli, ["solve", "--ring", "fibonacci", "--output", str(output)])
    assert result.exit_code == 0, result.output
    assert "Solved fibonacci" in result.output
    assert output.exists()
    stored = json.loads(output.read_text())
    assert len(stored["fsymbols"]) == 5
    assert stored["summary"]["variables"] == 5

    result = runner.invoke(cli, ["solve", "--ring", "fibonacci", "--output", str(output), "--check", "--json"])
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["success"] is True
    assert data["solved"] is False


def test_verify_input(runner, cli, tmp_path):
    output = tmp_path / "ising.json"
    assert runner.invoke(cli, ["solve", "--ring", "ising", "--output", str(output)]).exit_code == 0
    result = runner.invoke(cli, ["verify", "--ring", "ising", "--input", str(output)])
    assert result.exit_code == 0
    assert "PASSED" in result.output
    assert "pentagon:" in result.output

    numeric = runner.invoke(cli, ["verify", "--ring", "ising", "--input", str(output), "--numeric", "--json"])
    assert json.loads(numeric.output)["success"] is True


def test_verify_wrong_ring(runner, cli, tmp_path):
    output = tmp_path / "ising.json"
    runner.invoke(cli, ["solve", "--ring", "ising", "--output", str(output)])
    result = runner.invoke(cli, ["verify", "--ring", "fibonacci", "--input", str(output)])
    assert result.exit_code == 1


def test_verify_missing_file(runner, cli, tmp_path):
    result = runner.invoke(cli, ["verify", "--ring", "fibonacci", "--input", str(tmp_path / "none.json")])
    assert result.exit_code == 3


def test_braid_solves_on_demand(runner, cli, isolated_storage):
    result = runner.invoke(cli, ["braid", "--ring", "fibonacci"])
    assert result.exit_code == 0, result.output
    assert result.output.startswith("basis: (tau) (one)")
    assert list((isolated_storage / "fsymbols").glob("fibonacci-*.json"))

    data = json.loads(runner.invoke(cli, ["braid", "--ring", "fibonacci", "--order", "1,0", "--json"]).output)
    assert data["basis_line"] == "(one) (tau)"
    assert data["braid_relation_failures"] == []
    assert data["unitary"] is True


def test_braid_needs_three_strands(runner, cli):
    result = runner.invoke(cli, ["braid", "--ring", "fibonacci", "--strands", "2"])
    assert result.exit_code == 1
    assert "Error" in result.stderr


def test_gate_order_cap(runner, cli):
    result = runner.invoke(cli, ["gate", "order", "--ring", "fibonacci", "--cap", "50"])
    assert result.exit_code == 0, result.output
    assert "order: exceeds cap" in result.output


def test_gate_order_bad_phase(runner, cli):
    result = runner.invoke(cli, ["gate", "order", "--ring", "fibonacci", "--phase", "half"])
    assert result.exit_code == 1


@pytest.mark.slow
def test_gate_order_su2_4_modulo_phase(runner, cli):
    args = ["gate", "order", "--ring", "su2-4", "--anyon", "X_e", "--root", "Y", "--strands", "4"]
    result = runner.invoke(cli, args + ["--phase", "1/12"])
    assert result.exit_code == 0, result.output
    assert "order: 648" in result.output

    result = runner.invoke(cli, args + ["--phase", "1/24", "--phase-units", "turns", "--json"])
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["order"] == 648
    assert data["phase_units"] == "turns"


def test_workers_default_to_configured_cores(runner, cli, monkeypatch, tmp_path):
    real_solve = solve_pipeline.solve
    seen = []

    def recording_solve(ring, workers, **kwargs):
        seen.append(workers)
        return real_solve(ring, workers=1, **kwargs)

    monkeypatch.setattr(config, "WORKERS", 3)
    monkeypatch.setattr(solve_pipeline, "solve", recording_solve)
    result = runner.invoke(cli, ["solve", "--ring", "fibonacci", "--output", str(tmp_path / "fib.json")])
    assert result.exit_code == 0, result.output
    assert seen == [3]


def test_gate_weave_named_target(runner, cli, tmp_path):
    output = tmp_path / "weave.json"
    result = runner.invoke(cli, ["gate", "weave", "--ring", "fibonacci", "--target", "iX",
                                 "--max-len", "1", "--tol", "1e-6", "--output", str(output)])
    assert result.exit_code == 0, result.output
    assert "no weave up to length 1" in result.output
    assert json.loads(output.read_text())["found"] is False


def test_gate_weave_bad_tolerance(runner, cli):
    result = runner.invoke(cli, ["gate", "weave", "--ring", "fibonacci", "--target", "iX", "--tol", "0"])
    assert result.exit_code == 1


def test_unknown_ring(runner, cli):
    result = runner.invoke(cli, ["solve", "--ring", "toric-code"])
    assert result.exit_code == 1
    assert "unknown ring" in result.stderr

    result = runner.invoke(cli, ["solve", "--ring", "toric-code", "--json"])
    assert json.loads(result.output)["success"] is False


def test_solve_dumps_pentagons(runner, cli, tmp_path):
    dump = tmp_path / "pentagons.txt"
    result = runner.invoke(cli, ["solve", "--ring", "fibonacci", "--output", str(tmp_path / "fib.json"),
                                 "--dump-pentagons", str(dump)])
    assert result.exit_code == 0, result.output
    lines = dump.read_text().splitlines()
    assert lines
    assert any("F[tau,tau,tau,tau,tau,tau]" in line for line in lines)
