"""
Tests para orchestration.run_scenarios: despacho de configs, lotes en paralelo, sweeps y escritura de resultados.
Finalidad: Verificar el orden de resultados, la reproducibilidad con semilla y el resumen {"ok": True, ...}.
"""

from pathlib import Path

import pytest

from cli.config import parse_config
from common.errors import DomainError
from domain.outcome_models import Classification
from domain.path_models import Branch, Direction
from orchestration import run_scenarios as rs

EXPLICIT = """\
metric.kind = acoustic
metric.A = -1
metric.B = 10
initial.preset = eq-4.9
initial.rho0 = 2.5
run.branches = plus
stop.escape_factor = 3
"""


@pytest.fixture
def explicit_cfg():
    return parse_config(EXPLICIT)


def test_run_config_explicit_scene(explicit_cfg):
    """
    Objetivo: sin run.scenario se integra la escena explícita con las ramas pedidas.
    """
    outcome = rs.run_config(explicit_cfg)
    assert outcome.scenario_id == "explicit"
    assert list(outcome.paths) == ["plus_forward"]
    assert outcome.branch(Branch.PLUS, Direction.FORWARD).classification is Classification.ESCAPES_TO_INFINITY
    assert outcome.checks["xi0_drift"] < 1e-12


def test_run_config_dispatches_registered_scenario(mocker):
    cfg = parse_config(EXPLICIT + "run.scenario = acoustic-superradiant\n")
    fake = mocker.patch("scenarios.registry.run_scenario", return_value="outcome")
    assert rs.run_config(cfg) == "outcome"
    args, kwargs = fake.call_args
    assert args == ("acoustic-superradiant",)
    assert (kwargs["A"], kwargs["B"], kwargs["rho0"]) == (-1.0, 10.0, 2.5)
    assert "z0" not in kwargs
    assert kwargs["stops"].escape_factor == 3.0


def test_run_batch_keeps_input_order(explicit_cfg, mocker):
    """
    Objetivo: con varios procesos el resultado sigue el orden de entrada (executor.map).
    """
    pool = mocker.MagicMock()
    pool.__enter__.return_value.map.side_effect = lambda fn, items: map(lambda c: c.metric.B, items)
    mocker.patch.object(rs, "ProcessPoolExecutor", return_value=pool)
    configs = [explicit_cfg.model_copy(update={"metric": explicit_cfg.metric.model_copy(update={"B": b})})
               for b in (30.0, 10.0, 20.0)]
    assert rs.run_batch(configs, workers=3) == [30.0, 10.0, 20.0]


def test_run_batch_inline_for_single_worker(explicit_cfg, mocker):
    fake = mocker.patch.object(rs, "run_config", side_effect=lambda c: c.initial.rho0)
    pool = mocker.patch.object(rs, "ProcessPoolExecutor")
    assert rs.run_batch([explicit_cfg, explicit_cfg], workers=1) == [2.5, 2.5]
    pool.assert_not_called()
    assert fake.call_count == 2


def test_sweep_values_are_seeded():
    cfg = parse_config(EXPLICIT + "sweep.key = metric.B\nsweep.samples = 4\nsweep.low = 6\nsweep.high = 30\n")
    first = rs.sweep_values(cfg, seed=5)
    assert first == rs.sweep_values(cfg, seed=5)
    assert first != rs.sweep_values(cfg, seed=6)
    assert all(6.0 <= v <= 30.0 for v in first)


def test_sweep_configs_override_key():
    cfg = parse_config(EXPLICIT + "sweep.key = metric.B\nsweep.values = 10, 20\n")
    configs = rs.sweep_configs(cfg)
    assert [c.metric.B for c in configs] == [10.0, 20.0]
    assert all(c.sweep is None for c in configs)
    assert all(c.stop.escape_factor == 3.0 for c in configs)


def test_sweep_bad_key_and_bad_value():
    bad_section = parse_config(EXPLICIT + "sweep.key = nada.B\nsweep.values = 1\n")
    with pytest.raises(DomainError):
        rs.sweep_configs(bad_section)
    bad_value = parse_config(EXPLICIT + "sweep.key = initial.rho0\nsweep.values = -1\n")
    with pytest.raises(DomainError):
        rs.sweep_configs(bad_value)


def test_run_sweep_orders_by_index(mocker):
    cfg = parse_config(EXPLICIT + "sweep.key = metric.B\nsweep.values = 40, 10\n")
    mocker.patch.object(rs, "run_batch", side_effect=lambda configs, workers: [c.metric.B for c in configs])
    assert rs.run_sweep(cfg) == [(40.0, 40.0), (10.0, 10.0)]


def test_run_energy_requires_bump(explicit_cfg):
    with pytest.raises(DomainError):
        rs.run_energy(explicit_cfg)


def test_run_turning_reconciles_backward_events():
    """
    Objetivo: el retorno numérico hacia atrás de Plus coincide con una raíz exacta.
    """
    cfg = parse_config(EXPLICIT + "run.directions = backward\n")
    (report,) = rs.run_turning(cfg)
    assert report.branch is Branch.PLUS
    assert report.numeric_roots
    assert report.max_numeric_mismatch < 1e-7


def test_write_outcome_summary(tmp_path, explicit_cfg):
    outcome = rs.run_config(explicit_cfg)
    summary = rs.write_outcome(outcome, explicit_cfg, tmp_path)
    assert summary["ok"] is True
    names = {Path(f).name for f in summary["files"]}
    assert {"explicit.plus_forward.csv", "explicit.plus_forward.events.json", "explicit.json"} <= names
    assert (tmp_path / "paths").is_dir() and (tmp_path / "reports").is_dir()


def test_two_runs_write_identical_files(tmp_path):
    """
    Objetivo: la misma config corrida dos veces produce tablas e informes byte a byte iguales.
    """
    cfg = parse_config(EXPLICIT.replace("run.branches = plus", "run.branches = plus, minus")
                       + "run.directions = forward, backward\n")
    written = []
    for name in ("a", "b"):
        summary = rs.write_outcome(rs.run_config(cfg), cfg, tmp_path / name)
        written.append(sorted(Path(f) for f in summary["files"]))
    first, second = written
    assert [p.name for p in first] == [p.name for p in second]
    assert any(p.suffix == ".csv" for p in first)
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()
