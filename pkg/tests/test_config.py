"""
Tests para cli.config: parser `seccion.clave = valor` y su forma normalizada.
Finalidad: Verificar que se validan todas las claves antes de calcular y que cada error lleva su línea.
"""

import pytest

from cli.config import format_config, parse_config
from common.errors import ConfigError
from domain.config_models import OutputFormat
from domain.metric_models import MetricKind
from domain.path_models import Branch, Direction


def test_valid_kerr_config(kerr_config_text):
    cfg = parse_config(kerr_config_text)
    assert cfg.metric.kind is MetricKind.KERR
    assert cfg.metric.a == 0.8
    assert cfg.initial.preset == "eq-7.5"
    assert cfg.run.branches == [Branch.PLUS, Branch.MINUS]
    assert cfg.run.directions == [Direction.FORWARD]
    assert cfg.output.format is OutputFormat.CSV
    assert cfg.bump_spec() is None


def test_negative_spin_reports_line():
    text = "metric.kind = kerr\nmetric.a = -1\ninitial.preset = eq-7.5\ninitial.rho0 = 2\n"
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert [ln for ln, _ in exc.value.errors] == [2]
    assert "metric.a" in exc.value.errors[0][1]


def test_missing_initial_lists_every_key():
    """
    Objetivo: sin sección initial se informan todas las claves requeridas, no solo la primera.
    """
    with pytest.raises(ConfigError) as exc:
        parse_config("metric.kind = kerr\nmetric.a = 0.8\n")
    messages = " ".join(msg for _, msg in exc.value.errors)
    assert "initial.preset" in messages
    assert "initial.rho0" in messages


def test_unknown_key_and_syntax_errors_are_all_collected():
    text = (
        "metric.kind = acoustic\n"
        "metric.A = -1\n"
        "metric.Bb = 10\n"          # typo
        "initial.preset = eq-4.9\n"
        "initial.rho0 = 2.5\n"
        "esto no es una clave\n"
        "metric.A = -2\n"           # duplicada
    )
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    lines = [ln for ln, _ in exc.value.errors]
    assert lines == sorted(lines)
    assert {3, 6, 7} <= set(lines)
    assert "línea 3" in str(exc.value)


def test_unknown_scenario_rejected():
    text = "metric.kind = kerr\ninitial.preset = eq-7.5\ninitial.rho0 = 2\nrun.scenario = no-existe\n"
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.errors[0][0] == 4


def test_explicit_preset_requires_eta():
    with pytest.raises(ConfigError):
        parse_config("metric.kind = flat\ninitial.preset = explicit\ninitial.rho0 = 1\n")


def test_lists_and_sections():
    text = (
        "metric.kind = acoustic\nmetric.A = -1\nmetric.B = 10\n"
        "initial.preset = eq-4.9\ninitial.rho0 = 2.5\n"
        "run.branches = minus\nrun.directions = forward, backward\n"
        "stop.escape_factor = 8\nbump.halfwidth_rho = 0.1\nbump.halfwidth_phi = 0.2\n"
        "output.format = jsonl\nsweep.key = metric.B\nsweep.values = 10, 20, 40\n"
    )
    cfg = parse_config(text)
    assert cfg.run.branches == [Branch.MINUS]
    assert cfg.run.directions == [Direction.FORWARD, Direction.BACKWARD]
    assert cfg.stop_spec().escape_factor == 8.0
    assert cfg.stop_spec().x0_max == 1.0e4
    assert cfg.bump_spec().halfwidths == (0.1, 0.2, None)
    assert cfg.bump_spec().center.rho == 2.5
    assert cfg.sweep.values == [10.0, 20.0, 40.0]


def test_sweep_requires_grid():
    text = ("metric.kind = acoustic\nmetric.A = -1\ninitial.preset = eq-4.9\ninitial.rho0 = 2.5\n"
            "sweep.key = metric.B\n")
    with pytest.raises(ConfigError):
        parse_config(text)


def test_format_round_trip():
    """
    Objetivo: parse(format(cfg)) == cfg valor a valor.
    """
    text = (
        "metric.kind = acoustic\nmetric.A = -1\nmetric.B = 10\n"
        "initial.preset = explicit\ninitial.rho0 = 2.5\ninitial.eta_rho = -0.8\ninitial.eta_phi = -1.5\n"
        "run.directions = backward\nrun.seed = 7\nstop.spiral_efolds = 12\n"
        "bump.halfwidth_rho = 0.1\nbump.halfwidth_phi = 0.1\nbump.halfwidth_z = 0.3\n"
        "output.plot_data = true\n"
    )
    cfg = parse_config(text)
    again = parse_config(format_config(cfg))
    assert again == cfg
    assert format_config(again) == format_config(cfg)
