"""
Tests para cli.main: subcomandos, sobrescritura de opciones y códigos de salida.
Finalidad: Verificar el mapeo excepción -> código (0/2/3/4) sin correr integraciones largas.
"""

import json

import pytest

from cli import main as cli_main
from common.errors import AuditViolation, DegeneratePoint, GateFailed, NumericalFailure
from domain.outcome_models import ScenarioOutcome

ACOUSTIC_BUMP = """\
metric.kind = acoustic
metric.A = -1
metric.B = 10
initial.preset = eq-4.9
initial.rho0 = 2.5
bump.halfwidth_rho = 0.1
bump.halfwidth_phi = 0.1
"""


@pytest.fixture
def write_config(tmp_path):
    def _write(text, name="run.cfg"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


def test_energy_command_writes_report(tmp_path, write_config):
    """
    Objetivo: `energy` escribe reports/energy.json y sale con 0.
    """
    out = tmp_path / "out"
    code = cli_main.main(["energy", write_config(ACOUSTIC_BUMP), "--out", str(out)])
    assert code == 0
    doc = json.loads((out / "reports" / "energy.json").read_text(encoding="utf-8"))
    assert doc["kind"] == "energy"
    assert doc["payload"]["superradiant"] is True
    assert doc["config"]["output"]["dir"] == str(out)


def test_config_error_exit_code(write_config, capsys):
    code = cli_main.main(["run", write_config("metric.kind = kerr\nmetric.a = -1\n")])
    assert code == 2
    assert "línea 2" in capsys.readouterr().out


def test_missing_file_is_config_error(tmp_path):
    assert cli_main.main(["run", str(tmp_path / "nope.cfg")]) == 2


def test_gate_failure_exit_code(write_config, mocker):
    mocker.patch.object(cli_main, "run_config", side_effect=GateFailed("B no supera el umbral"))
    assert cli_main.main(["run", write_config(ACOUSTIC_BUMP)]) == 4


def test_numerical_failure_exit_code(write_config, mocker):
    mocker.patch.object(cli_main, "run_energy", side_effect=NumericalFailure("residuo"))
    assert cli_main.main(["energy", write_config(ACOUSTIC_BUMP)]) == 3


@pytest.mark.parametrize("error,code", [
    (DegeneratePoint("punto sobre el anillo"), 2),
    (AuditViolation("delta2_lower_bound violada"), 4),
])
def test_domain_and_audit_exit_codes(write_config, mocker, error, code):
    """
    Objetivo: punto degenerado sale con 2 (dominio) y auditoría violada con 4.
    """
    mocker.patch.object(cli_main, "run_config", side_effect=error)
    assert cli_main.main(["run", write_config(ACOUSTIC_BUMP)]) == code


def test_run_uses_overrides(tmp_path, write_config, mocker):
    """
    Objetivo: --out, --format y --seed pisan la config antes de correr.
    """
    outcome = ScenarioOutcome(scenario_id="explicit", parameters={})
    run = mocker.patch.object(cli_main, "run_config", return_value=outcome)
    write = mocker.patch.object(cli_main, "write_outcome",
                                return_value={"ok": True, "scenario": "explicit", "files": []})
    code = cli_main.main(["run", write_config(ACOUSTIC_BUMP), "--out", str(tmp_path / "o"),
                          "--format", "jsonl", "--seed", "11"])
    assert code == 0
    cfg = run.call_args.args[0]
    assert cfg.output.dir == str(tmp_path / "o")
    assert cfg.output.format.value == "jsonl"
    assert cfg.run.seed == 11
    write.assert_called_once()


def test_sweep_command_writes_summary(tmp_path, write_config, mocker):
    text = ACOUSTIC_BUMP + "sweep.key = metric.B\nsweep.values = 10, 20\n"
    outcomes = [(10.0, ScenarioOutcome(scenario_id="explicit", parameters={"B": 10.0})),
                (20.0, ScenarioOutcome(scenario_id="explicit", parameters={"B": 20.0}))]
    mocker.patch.object(cli_main, "run_sweep", return_value=outcomes)
    write = mocker.patch.object(cli_main, "write_outcome", return_value={"ok": True})
    code = cli_main.main(["sweep", write_config(text), "--out", str(tmp_path)])
    assert code == 0
    assert [c.kwargs["stem"] for c in write.call_args_list] == ["explicit.000", "explicit.001"]
    doc = json.loads((tmp_path / "reports" / "sweep.json").read_text(encoding="utf-8"))
    assert [r["value"] for r in doc["payload"]["results"]] == [10.0, 20.0]


def test_parser_requires_subcommand():
    with pytest.raises(SystemExit):
        cli_main.build_parser().parse_args([])
