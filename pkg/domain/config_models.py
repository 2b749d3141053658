# domain/config_models.py
"""
Modelos Pydantic de la configuración de una corrida (archivo `seccion.clave = valor`).
Todas las secciones prohíben claves desconocidas.
"""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from domain.energy_models import BumpSpec
from domain.metric_models import MetricKind, MetricModel, SpatialPoint
from domain.path_models import Branch, Direction, StopSpec


class OutputFormat(str, Enum):
    CSV = "csv"
    JSONL = "jsonl"
    PARQUET = "parquet"


def _split_list(value):
    if isinstance(value, str):
        return [v.strip() for v in value.split(",") if v.strip()]
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MetricSection(_Section):
    kind: MetricKind
    A: float = 0.0
    B: float = 0.0
    m: float = Field(1.0, gt=0.0)
    a: float = Field(0.0, ge=0.0)

    @model_validator(mode="after")
    def _check(self) -> "MetricSection":
        if self.kind is MetricKind.ACOUSTIC and self.A == 0 and self.B == 0:
            raise ValueError("acústica requiere (A, B) != (0, 0)")
        return self

    def model(self) -> MetricModel:
        if self.kind is MetricKind.KERR:
            return MetricModel.kerr(self.m, self.a)
        if self.kind is MetricKind.ACOUSTIC:
            return MetricModel.acoustic(self.A, self.B)
        return MetricModel.flat()


PRESET_NAMES = ("eq-4.9", "eq-5.2", "eq-7.5", "remark-4.2", "explicit")


class InitialSection(_Section):
    preset: str = Field(..., description="Datos iniciales con nombre o 'explicit'")
    rho0: float = Field(..., gt=0.0)
    z0: float = 0.0
    eta_rho: float | None = None
    eta_phi: float | None = None
    eta_z: float = 0.0

    @field_validator("preset")
    @classmethod
    def _known(cls, v: str) -> str:
        if v not in PRESET_NAMES:
            raise ValueError(f"preset desconocido '{v}' (opciones: {', '.join(PRESET_NAMES)})")
        return v

    @model_validator(mode="after")
    def _explicit_eta(self) -> "InitialSection":
        if self.preset == "explicit" and (self.eta_rho is None or self.eta_phi is None):
            raise ValueError("preset explicit requiere eta_rho y eta_phi")
        return self

    def point(self) -> SpatialPoint:
        return SpatialPoint(rho=self.rho0, phi=0.0, z=self.z0)

    def eta(self) -> tuple[float, float, float] | None:
        if self.eta_rho is None or self.eta_phi is None:
            return None
        return (self.eta_rho, self.eta_phi, self.eta_z)


class RunSection(_Section):
    scenario: str | None = None
    branches: list[Branch] = Field(default_factory=lambda: [Branch.PLUS, Branch.MINUS])
    directions: list[Direction] = Field(default_factory=lambda: [Direction.FORWARD])
    seed: int = 0
    a_grid: list[float] | None = None
    extremal_x0_max: float | None = Field(None, gt=0.0)
    workers: int = Field(1, ge=1)

    @field_validator("branches", "directions", "a_grid", mode="before")
    @classmethod
    def _lists(cls, v):
        return _split_list(v)


class StopSection(_Section):
    """Sobrescribe los valores por defecto de StopSpec; None = por defecto."""
    escape_factor: float | None = Field(None, gt=1.0)
    x0_max: float | None = Field(None, gt=0.0)
    s_max: float | None = Field(None, gt=0.0)
    rtol: float | None = Field(None, gt=0.0)
    atol: float | None = Field(None, gt=0.0)
    h_tol: float | None = Field(None, gt=0.0)
    ring_tol: float | None = Field(None, gt=0.0)
    center_tol: float | None = Field(None, gt=0.0)
    stop_on_horizon: bool | None = None
    spiral_efolds: float | None = Field(None, gt=0.0)
    spiral_floor: float | None = Field(None, gt=0.0)
    dense_substeps: int | None = Field(None, ge=0)

    def spec(self) -> StopSpec:
        return StopSpec(**self.model_dump(exclude_none=True))


class BumpSection(_Section):
    halfwidth_rho: float = Field(..., gt=0.0)
    halfwidth_phi: float = Field(..., gt=0.0)
    halfwidth_z: float | None = Field(None, gt=0.0)
    normalization: float = Field(1.0, gt=0.0)
    order: int = Field(32, ge=4)

    def spec(self, center: SpatialPoint) -> BumpSpec:
        return BumpSpec(
            center=center,
            halfwidths=(self.halfwidth_rho, self.halfwidth_phi, self.halfwidth_z),
            normalization=self.normalization, order=self.order,
        )


class OutputSection(_Section):
    dir: str = "out"
    format: OutputFormat = OutputFormat.CSV
    plot_data: bool = False


class SweepSection(_Section):
    key: str = Field(..., description="Clave con punto a variar, p.ej. metric.B")
    values: list[float] | None = None
    samples: int | None = Field(None, ge=1)
    low: float | None = None
    high: float | None = None

    @field_validator("values", mode="before")
    @classmethod
    def _lists(cls, v):
        return _split_list(v)

    @model_validator(mode="after")
    def _grid(self) -> "SweepSection":
        if self.values is None and None in (self.samples, self.low, self.high):
            raise ValueError("sweep requiere values o (samples, low, high)")
        if "." not in self.key:
            raise ValueError(f"sweep.key debe tener la forma seccion.clave ('{self.key}')")
        return self


class RunConfig(_Section):
    metric: MetricSection
    initial: InitialSection
    run: RunSection = Field(default_factory=RunSection)
    stop: StopSection = Field(default_factory=StopSection)
    bump: BumpSection | None = None
    output: OutputSection = Field(default_factory=OutputSection)
    sweep: SweepSection | None = None

    def stop_spec(self) -> StopSpec:
        return self.stop.spec()

    def bump_spec(self) -> BumpSpec | None:
        return None if self.bump is None else self.bump.spec(self.initial.point())
