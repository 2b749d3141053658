# orchestration/run_scenarios.py
"""
Runner de corridas.
- run_config  : una config -> ScenarioOutcome (escenario registrado o escena explícita)
- run_batch   : varias configs en paralelo (ProcessPoolExecutor.map conserva el orden)
- run_sweep   : grilla sobre una clave escalar (values o muestras con semilla)
- run_energy / run_turning : reportes sueltos sin integrar escenarios completos
- write_outcome : emite trayectorias + reporte y devuelve el resumen {"ok": True, ...}
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Iterable

import numpy as np
from pydantic import ValidationError

from common.errors import DomainError
from common.log import log
from common.paths import ensure_dirs
from domain.config_models import OutputFormat, RunConfig
from domain.energy_models import EnergyReport, TurningReport
from domain.metric_models import MetricKind
from domain.outcome_models import ScenarioOutcome
from domain.path_models import Direction, InitialData
from physics.energy import superradiance_report
from physics.turning import turning_report
from scenarios.presets import build_initial
from scenarios.runs import backward_stops, run_branch, run_explicit


def _initial(cfg: RunConfig) -> InitialData:
    ini = cfg.initial
    opts: dict[str, Any] = {}
    if ini.eta() is not None:
        opts["eta"] = ini.eta()
    if ini.eta_rho is not None:
        opts["eta_rho"] = ini.eta_rho
    return build_initial(ini.preset, cfg.metric.model(), ini.rho0, ini.z0, **opts)


def scenario_kwargs(cfg: RunConfig) -> dict[str, Any]:
    """
    Claves de la config con el nombre de los parámetros de los escenarios.
    Solo las escritas en el archivo: el resto queda con el valor por defecto del escenario.
    """
    given = {
        k: getattr(section, k)
        for section in (cfg.metric, cfg.initial)
        for k in section.model_fields_set
        if k in ("A", "B", "m", "a", "rho0", "z0", "eta_rho")
    }
    return {
        **given,
        "a_grid": tuple(cfg.run.a_grid) if cfg.run.a_grid else None,
        "extremal_x0_max": cfg.run.extremal_x0_max,
        "stops": cfg.stop_spec(),
        "bump": cfg.bump_spec(),
    }


def run_config(cfg: RunConfig) -> ScenarioOutcome:
    if cfg.run.scenario is not None:
        from scenarios.registry import run_scenario  # import tardío: registry arrastra todos los escenarios
        log("runner", f"escenario {cfg.run.scenario}")
        return run_scenario(cfg.run.scenario, **scenario_kwargs(cfg))
    log("runner", f"escena explícita preset={cfg.initial.preset}")
    return run_explicit(_initial(cfg), cfg.run.branches, cfg.run.directions,
                        cfg.stop_spec(), cfg.bump_spec())


def run_batch(configs: Iterable[RunConfig], workers: int = 1) -> list[ScenarioOutcome]:
    """Resultados en el orden de entrada; workers=1 corre en el proceso actual."""
    configs = list(configs)
    if workers <= 1 or len(configs) <= 1:
        return [run_config(c) for c in configs]
    log("runner", f"{len(configs)} corridas en {workers} procesos")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_config, configs))


def sweep_values(cfg: RunConfig, seed: int | None = None) -> list[float]:
    sweep = cfg.sweep
    if sweep is None:
        raise DomainError("la config no tiene sección sweep")
    if sweep.values is not None:
        return list(sweep.values)
    rng = np.random.default_rng(cfg.run.seed if seed is None else seed)
    return [float(v) for v in rng.uniform(sweep.low, sweep.high, sweep.samples)]


def sweep_configs(cfg: RunConfig, seed: int | None = None) -> list[RunConfig]:
    section, key = cfg.sweep.key.split(".", 1) if cfg.sweep else ("", "")
    out: list[RunConfig] = []
    for value in sweep_values(cfg, seed):
        data = cfg.model_dump(exclude={"sweep"}, exclude_unset=True)
        if section not in RunConfig.model_fields or section == "sweep":
            raise DomainError(f"sweep.key apunta a una sección inexistente: {cfg.sweep.key}")
        data.setdefault(section, {})[key] = value
        try:
            out.append(RunConfig.model_validate(data))
        except ValidationError as e:
            raise DomainError(f"sweep {cfg.sweep.key}={value!r}: {e.errors()[0]['msg']}") from e
    return out


def run_sweep(cfg: RunConfig, seed: int | None = None) -> list[tuple[float, ScenarioOutcome]]:
    values = sweep_values(cfg, seed)
    log("runner", f"sweep {cfg.sweep.key}: {len(values)} valores")
    outcomes = run_batch(sweep_configs(cfg, seed), cfg.run.workers)
    return list(zip(values, outcomes))


def run_energy(cfg: RunConfig) -> EnergyReport:
    bump = cfg.bump_spec()
    if bump is None:
        raise DomainError("energy requiere la sección bump")
    initial = _initial(cfg)
    return superradiance_report(initial.model, bump, initial.eta)


def run_turning(cfg: RunConfig) -> list[TurningReport]:
    """Raíces exactas/asintóticas por rama, contrastadas con los eventos de las corridas pedidas."""
    if cfg.metric.kind is not MetricKind.ACOUSTIC:
        raise DomainError("turning solo está disponible para la métrica acústica")
    initial = _initial(cfg)
    reports = []
    for branch in cfg.run.branches:
        paths = []
        for direction in cfg.run.directions:
            stops = backward_stops(cfg.stop_spec()) if direction is Direction.BACKWARD else cfg.stop_spec()
            paths.append(run_branch(initial, branch, direction, stops))
        reports.append(turning_report(initial.model, initial.y0.rho, initial.eta, branch, paths))
    return reports


def write_outcome(outcome: ScenarioOutcome, cfg: RunConfig, out_dir: Path | str,
                  fmt: OutputFormat | str | None = None, stem: str | None = None) -> dict[str, Any]:
    from cli.emit import emit_path, emit_report  # import tardío: cli depende de orchestration

    paths_dir, reports_dir = ensure_dirs(out_dir)
    stem = stem or outcome.scenario_id
    fmt = OutputFormat(fmt or cfg.output.format)
    files: list[str] = []
    for key, path in outcome.paths.items():
        written = emit_path(path, paths_dir, f"{stem}.{key}", fmt, cfg.output.plot_data)
        files.extend(str(p) for p in written)
    report = emit_report(outcome, reports_dir / f"{stem}.json", "scenario", cfg)
    files.append(str(report))
    return {"ok": True, "scenario": outcome.scenario_id, "files": files}
