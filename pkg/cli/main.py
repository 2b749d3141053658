# cli/main.py
"""
Entrada de línea de comandos.

    python -m cli.main run     <config> [--out DIR] [--format csv|jsonl|parquet] [--seed N]
    python -m cli.main sweep   <config> ...
    python -m cli.main energy  <config> ...
    python -m cli.main turning <config> ...

Códigos de salida: 0 ok, 2 config/dominio, 3 falla numérica, 4 gate.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from cli.config import parse_config
from cli.emit import emit_report
from common.errors import ConfigError, SuperradianceError
from common.log import log, warn
from common.paths import ensure_dirs
from domain.config_models import OutputFormat, RunConfig
from orchestration.run_scenarios import run_config, run_energy, run_sweep, run_turning, write_outcome

EXIT_OK = 0
EXIT_NUMERICAL = 3


def load_config(path: Path | str) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError([(0, f"no se pudo leer {path}: {e}")]) from e
    return parse_config(text)


def _apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    output = cfg.output
    if args.out is not None:
        output = output.model_copy(update={"dir": args.out})
    if args.format is not None:
        output = output.model_copy(update={"format": OutputFormat(args.format)})
    run = cfg.run if args.seed is None else cfg.run.model_copy(update={"seed": args.seed})
    return cfg.model_copy(update={"output": output, "run": run})


def _failed(outcome) -> bool:
    return any(p.failed for p in outcome.paths.values())


def cmd_run(cfg: RunConfig) -> int:
    outcome = run_config(cfg)
    summary = write_outcome(outcome, cfg, cfg.output.dir)
    log("cli", f"{summary['scenario']}: {len(summary['files'])} archivos")
    return EXIT_NUMERICAL if _failed(outcome) else EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    results = run_sweep(cfg)
    rows = []
    code = EXIT_OK
    for i, (value, outcome) in enumerate(results):
        write_outcome(outcome, cfg, cfg.output.dir, stem=f"{outcome.scenario_id}.{i:03d}")
        rows.append({
            "index": i,
            "value": value,
            "classifications": {
                f"{b.branch.value}_{b.direction.value}{'_' + b.label if b.label else ''}": b.classification.value
                for b in outcome.branches
            },
            "checks": outcome.checks,
        })
        if _failed(outcome):
            code = EXIT_NUMERICAL
    _, reports_dir = ensure_dirs(cfg.output.dir)
    emit_report({"key": cfg.sweep.key, "results": rows}, reports_dir / "sweep.json", "sweep", cfg)
    return code


def cmd_energy(cfg: RunConfig) -> int:
    report = run_energy(cfg)
    _, reports_dir = ensure_dirs(cfg.output.dir)
    emit_report(report, reports_dir / "energy.json", "energy", cfg)
    log("cli", f"superradiant={report.superradiant}")
    return EXIT_OK


def cmd_turning(cfg: RunConfig) -> int:
    reports = run_turning(cfg)
    _, reports_dir = ensure_dirs(cfg.output.dir)
    payload = {"reports": [r.model_dump(mode="json") for r in reports]}
    emit_report(payload, reports_dir / "turning.json", "turning", cfg)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "energy": cmd_energy,
    "turning": cmd_turning,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superradiance",
        description="Geodésicas nulas, energías y superradiancia en métricas acústicas y de Kerr.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "corre un escenario o una escena explícita"),
        ("sweep", "grilla de parámetros (sección sweep)"),
        ("energy", "reporte de energías del dato inicial (sección bump)"),
        ("turning", "raíces de retorno exactas/asintóticas vs numéricas"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="archivo seccion.clave = valor")
        p.add_argument("--out", default=None, help="directorio de salida (pisa output.dir)")
        p.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
        p.add_argument("--seed", type=int, default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        return COMMANDS[args.command](cfg)
    except ConfigError as e:
        warn(str(e))
        return e.exit_code
    except SuperradianceError as e:
        warn(f"{type(e).__name__}: {e}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
