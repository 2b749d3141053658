# cli/emit.py
"""
Serialización de resultados.
- emit_path   : muestras de una trayectoria (csv | jsonl | parquet) + sidecar de eventos
                + archivos para graficar (x0, rho) y (x, y) si plot_data
- emit_report : documento JSON con orden de campos estable (ScenarioOutcome, EnergyReport, ...)
"""

from __future__ import annotations

import json
import platform
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
import pydantic
import scipy
from pydantic import BaseModel

from common.errors import SerializationError
from common.log import log
from domain.config_models import OutputFormat, RunConfig
from domain.path_models import GeodesicPath, StopSpec

SCHEMA_VERSION = 1
GENERATOR = "superradiance-geodesics"

PATH_COLUMNS = [
    "s", "x0", "rho", "phi_unwrapped", "z", "xi_rho", "xi_phi", "xi_z",
    "H_residual", "delta1", "delta2", "region",
]


def _write_text(target: Path, text: str) -> Path:
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    except OSError as e:
        raise SerializationError(f"no se pudo escribir {target}: {e}") from e
    log("emit", f"OK {target}")
    return target


def path_frame(path: GeodesicPath) -> pd.DataFrame:
    df = path.to_frame()[PATH_COLUMNS]
    numeric = df.drop(columns=["region"]).to_numpy(dtype=float)
    if not np.all(np.isfinite(numeric)) and not path.failed:
        raise SerializationError("valores no finitos en una trayectoria sin NumericalFailure")
    return df


def _events_doc(path: GeodesicPath) -> list[dict[str, Any]]:
    return [
        {"kind": e.kind.value, "s": e.s, "x0": e.x0,
         "location": {"rho": e.location.rho, "phi": e.location.phi, "z": e.location.z},
         "data": e.data}
        for e in path.events
    ]


def emit_path(path: GeodesicPath, out_dir: Path | str, stem: str,
              fmt: OutputFormat | str = OutputFormat.CSV, plot_data: bool = False) -> list[Path]:
    fmt = OutputFormat(fmt)
    out_dir = Path(out_dir)
    df = path_frame(path)
    written: list[Path] = []

    target = out_dir / f"{stem}.{fmt.value}"
    if fmt is OutputFormat.CSV:
        written.append(_write_text(target, df.to_csv(index=False, lineterminator="\n")))
    elif fmt is OutputFormat.JSONL:
        rows = (json.dumps(dict(zip(PATH_COLUMNS, row))) for row in df.itertuples(index=False, name=None))
        written.append(_write_text(target, "".join(r + "\n" for r in rows)))
    else:
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            df.to_parquet(target, index=False)
        except OSError as e:
            raise SerializationError(f"no se pudo escribir {target}: {e}") from e
        log("emit", f"OK {target}")
        written.append(target)

    events = json.dumps(_events_doc(path), indent=2, allow_nan=False)
    written.append(_write_text(out_dir / f"{stem}.events.json", events + "\n"))

    if plot_data:
        rho, phi = df["rho"].to_numpy(), df["phi_unwrapped"].to_numpy()
        rho_x0 = pd.DataFrame({"x0": df["x0"], "rho": df["rho"]})
        xy = pd.DataFrame({"x": rho * np.cos(phi), "y": rho * np.sin(phi)})
        written.append(_write_text(out_dir / f"{stem}.rho_x0.csv", rho_x0.to_csv(index=False, lineterminator="\n")))
        written.append(_write_text(out_dir / f"{stem}.xy.csv", xy.to_csv(index=False, lineterminator="\n")))
    return written


def read_path_csv(target: Path | str) -> pd.DataFrame:
    """Lectura inversa de emit_path(csv): floats exactos (round_trip)."""
    return pd.read_csv(target, float_precision="round_trip")


def versions() -> dict[str, str]:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
        "pydantic": pydantic.VERSION,
    }


def _default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    raise TypeError(f"no serializable: {type(obj).__name__}")


def build_report(payload: BaseModel | dict, kind: str, config: RunConfig | None = None,
                 stops: StopSpec | None = None) -> dict[str, Any]:
    body = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    tol = stops or (config.stop_spec() if config is not None else StopSpec())
    return {
        "schema_version": SCHEMA_VERSION,
        "generator": GENERATOR,
        "versions": versions(),
        "tolerances": tol.model_dump(mode="json"),
        "config": config.model_dump(mode="json", exclude_none=True) if config is not None else None,
        "kind": kind,
        "payload": body,
    }


def emit_report(payload: BaseModel | dict, target: Path | str, kind: str,
                config: RunConfig | None = None, stops: StopSpec | None = None) -> Path:
    doc = build_report(payload, kind, config, stops)
    try:
        text = json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False, default=_default)
    except ValueError as e:
        raise SerializationError(f"{target}: el reporte contiene NaN/Inf ({e})") from e
    return _write_text(Path(target), text + "\n")
