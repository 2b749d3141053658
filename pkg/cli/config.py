# cli/config.py
"""
Parser del archivo de configuración orientado a líneas:

    # comentario
    metric.kind = kerr
    metric.a    = 0.8
    initial.preset = eq-7.5

- parse_config(text) -> RunConfig   (ConfigError con todos los errores y sus líneas)
- format_config(cfg) -> str         (forma normalizada; parse(format(cfg)) == cfg)
"""

from __future__ import annotations

from enum import Enum

from pydantic import ValidationError

from common.errors import ConfigError
from domain.config_models import RunConfig

REQUIRED_SECTIONS = ("metric", "initial")


def _split_lines(text: str) -> tuple[dict[str, dict[str, str]], dict[str, int], list[tuple[int, str]]]:
    data: dict[str, dict[str, str]] = {}
    lines: dict[str, int] = {}
    errors: list[tuple[int, str]] = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append((n, f"se esperaba 'seccion.clave = valor': {raw.strip()!r}"))
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        section, dot, field = key.partition(".")
        if not dot or not section or not field or "." in field:
            errors.append((n, f"clave inválida '{key}' (forma seccion.clave)"))
            continue
        if key in lines:
            errors.append((n, f"clave duplicada '{key}' (ya en línea {lines[key]})"))
            continue
        data.setdefault(section, {})[field] = value
        lines[key] = n
        lines.setdefault(section, n)
    return data, lines, errors


def _line_for(loc: tuple, lines: dict[str, int]) -> int:
    parts = [str(p) for p in loc]
    if len(parts) >= 2 and f"{parts[0]}.{parts[1]}" in lines:
        return lines[f"{parts[0]}.{parts[1]}"]
    if parts and parts[0] in lines:
        return lines[parts[0]]
    return 0


def parse_config(text: str) -> RunConfig:
    data, lines, errors = _split_lines(text)
    for section in REQUIRED_SECTIONS:
        data.setdefault(section, {})

    cfg = None
    try:
        cfg = RunConfig.model_validate(data)
    except ValidationError as exc:
        for err in exc.errors():
            loc = tuple(p for p in err["loc"] if not isinstance(p, int))
            key = ".".join(str(p) for p in loc[:2]) or "config"
            if err["type"] == "missing":
                errors.append((_line_for(loc, lines), f"falta la clave requerida '{key}'"))
            elif err["type"] == "extra_forbidden":
                errors.append((_line_for(loc, lines), f"clave desconocida '{key}'"))
            else:
                errors.append((_line_for(loc, lines), f"{key}: {err['msg']}"))

    if cfg is not None and cfg.run.scenario is not None:
        from scenarios.registry import SCENARIOS  # import tardío: registry arrastra la física
        if cfg.run.scenario not in SCENARIOS:
            errors.append((lines.get("run.scenario", 0),
                           f"escenario desconocido '{cfg.run.scenario}' (opciones: {', '.join(SCENARIOS)})"))

    if errors:
        raise ConfigError(sorted(errors, key=lambda e: e[0]))
    return cfg


def _fmt(value) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_fmt(v) for v in value)
    return str(value)


def format_config(cfg: RunConfig) -> str:
    out: list[str] = []
    for section, values in cfg.model_dump(exclude_none=True).items():
        if not isinstance(values, dict):
            continue
        for key, value in values.items():
            out.append(f"{section}.{key} = {_fmt(value)}")
    return "\n".join(out) + "\n"
