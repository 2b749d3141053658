# domain/path_models.py
"""
Modelos Pydantic de las trayectorias: covectores, estados de fase, eventos y
la trayectoria muestreada completa.
"""

from __future__ import annotations

from enum import Enum

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from domain.metric_models import MetricModel, RegionKind, SpatialPoint


class Branch(str, Enum):
    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.FORWARD else -1


class Covector(BaseModel):
    model_config = ConfigDict(frozen=True)

    xi0: float = Field(..., description="Dual del tiempo (conservado)")
    xi_rho: float
    xi_phi: float = Field(..., description="Momento angular (conservado)")
    xi_z: float = 0.0

    @property
    def spatial(self) -> tuple[float, float, float]:
        return (self.xi_rho, self.xi_phi, self.xi_z)


class PhaseState(BaseModel):
    model_config = ConfigDict(frozen=True)

    s: float = Field(..., description="Parámetro afín")
    x0: float = Field(..., description="Tiempo coordenado")
    p: SpatialPoint
    xi: Covector


class EventKind(str, Enum):
    ERGOSPHERE_CROSS = "ErgosphereCross"
    OUTER_HORIZON_CROSS = "OuterHorizonCross"
    INNER_HORIZON_CROSS = "InnerHorizonCross"
    TURNING_POINT = "TurningPoint"
    ESCAPE = "Escape"
    RING_TERMINATION = "RingTermination"
    CENTER_TERMINATION = "CenterTermination"
    SPIRAL_TRUNCATION = "SpiralTruncation"
    MAX_TIME = "MaxTime"
    NUMERICAL_FAILURE = "NumericalFailure"


class Event(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: EventKind
    s: float
    x0: float
    location: SpatialPoint
    data: float = Field(0.0, description="dρ/dx₀ en el evento")


class SampleDiagnostics(BaseModel):
    model_config = ConfigDict(frozen=True)

    h_residual: float
    delta1: float
    delta2: float
    region: RegionKind


class StopSpec(BaseModel):
    """Condiciones de parada y tolerancias de una integración."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    escape_factor: float = Field(100.0, gt=1.0, description="Escape en ρ >= escape_factor·ρ₀")
    x0_max: float = Field(1.0e4, gt=0.0, description="|x₀| máximo")
    s_max: float = Field(1.0e6, gt=0.0, description="Presupuesto de parámetro afín")
    rtol: float = Field(1.0e-10, gt=0.0)
    atol: float = Field(1.0e-12, gt=0.0)
    h_tol: float = Field(1.0e-8, gt=0.0, description="Residuo de H permitido, relativo a la escala de H")
    ring_tol: float = Field(1.0e-10, gt=0.0, description="Parada en (ρ−a)²+z² < ring_tol·a²")
    center_tol: float = Field(1.0e-8, gt=0.0, description="Parada en ρ < center_tol·ρ₀")
    stop_on_horizon: bool = Field(False, description="El cruce del horizonte exterior es terminal")
    spiral_efolds: float | None = Field(None, gt=0.0, description="Truncado |x₀|·κ̂ >= spiral_efolds")
    spiral_floor: float = Field(1.0e-12, gt=0.0, description="Truncado si distancia al horizonte < floor·ρ_h")
    dense_substeps: int = Field(3, ge=0, description="Muestras densas extra por paso aceptado")


class InitialData(BaseModel):
    """Modelo + punto inicial + covector espacial η (la "escena" reversible)."""
    model_config = ConfigDict(frozen=True)

    model: MetricModel
    y0: SpatialPoint
    eta: tuple[float, float, float]
    preset: str = "explicit"


class GeodesicPath(BaseModel):
    model_config = ConfigDict(frozen=True)

    model: MetricModel
    branch: Branch
    direction: Direction
    samples: list[PhaseState]
    events: list[Event] = Field(default_factory=list)
    diagnostics: list[SampleDiagnostics] = Field(default_factory=list)

    @property
    def terminal_event(self) -> Event | None:
        return self.events[-1] if self.events else None

    def events_of(self, kind: EventKind) -> list[Event]:
        return [e for e in self.events if e.kind is kind]

    @property
    def failed(self) -> bool:
        return any(e.kind is EventKind.NUMERICAL_FAILURE for e in self.events)

    def to_frame(self) -> pd.DataFrame:
        """Tabla de muestras con las columnas de salida (+ xi0)."""
        rows = {
            "s": [st.s for st in self.samples],
            "x0": [st.x0 for st in self.samples],
            "rho": [st.p.rho for st in self.samples],
            "phi_unwrapped": [st.p.phi for st in self.samples],
            "z": [st.p.z for st in self.samples],
            "xi0": [st.xi.xi0 for st in self.samples],
            "xi_rho": [st.xi.xi_rho for st in self.samples],
            "xi_phi": [st.xi.xi_phi for st in self.samples],
            "xi_z": [st.xi.xi_z for st in self.samples],
        }
        df = pd.DataFrame(rows)
        if self.diagnostics:
            df["H_residual"] = [d.h_residual for d in self.diagnostics]
            df["delta1"] = [d.delta1 for d in self.diagnostics]
            df["delta2"] = [d.delta2 for d in self.diagnostics]
            df["region"] = [d.region.value for d in self.diagnostics]
        return df

    def column(self, name: str) -> np.ndarray:
        return self.to_frame()[name].to_numpy()
