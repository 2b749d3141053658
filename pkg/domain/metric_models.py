# domain/metric_models.py
"""
Modelos Pydantic del núcleo métrico: la instancia de métrica, puntos espaciales
en coordenadas cilíndricas y los campos (K, b̂) evaluados en un punto.
"""

from __future__ import annotations

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class MetricKind(str, Enum):
    ACOUSTIC = "acoustic"
    KERR = "kerr"
    # referencia con K ≡ 0 (espacio plano), útil para chequeos de signo
    FLAT = "flat"


class RegionKind(str, Enum):
    EXTERIOR = "exterior"
    ERGOREGION = "ergoregion"
    BETWEEN_HORIZONS = "between_horizons"
    INSIDE_INNER = "inside_inner"
    NO_HORIZON_INTERIOR = "no_horizon_interior"


class MetricModel(BaseModel):
    """Métrica estacionaria: tipo + parámetros (A, B acústicos; m, a de Kerr)."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: MetricKind = Field(..., description="Backend de la métrica")
    A: float = Field(0.0, description="Intensidad radial del flujo (con signo)")
    B: float = Field(0.0, description="Intensidad angular del flujo (con signo)")
    m: float = Field(1.0, description="Masa (Kerr)")
    a: float = Field(0.0, description="Spin (Kerr)")

    @model_validator(mode="after")
    def _check_params(self) -> "MetricModel":
        for name in ("A", "B", "m", "a"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} debe ser finito")
        if self.kind is MetricKind.KERR:
            if self.m <= 0:
                raise ValueError("Kerr requiere m > 0")
            if self.a < 0:
                raise ValueError("Kerr requiere a >= 0")
        if self.kind is MetricKind.ACOUSTIC and self.A == 0 and self.B == 0:
            raise ValueError("acústica requiere (A, B) != (0, 0)")
        return self

    @classmethod
    def kerr(cls, m: float, a: float) -> "MetricModel":
        return cls(kind=MetricKind.KERR, m=m, a=a)

    @classmethod
    def acoustic(cls, A: float, B: float) -> "MetricModel":
        return cls(kind=MetricKind.ACOUSTIC, A=A, B=B)

    @classmethod
    def flat(cls) -> "MetricModel":
        return cls(kind=MetricKind.FLAT)

    # ---------- horizontes ----------

    @property
    def has_horizons(self) -> bool:
        if self.kind is MetricKind.KERR:
            return self.a <= self.m
        if self.kind is MetricKind.ACOUSTIC:
            return self.A != 0
        return False

    @property
    def r_plus(self) -> float | None:
        if self.kind is not MetricKind.KERR or self.a > self.m:
            return None
        return self.m + math.sqrt(self.m**2 - self.a**2)

    @property
    def r_minus(self) -> float | None:
        if self.kind is not MetricKind.KERR or self.a > self.m:
            return None
        return self.m - math.sqrt(self.m**2 - self.a**2)

    @property
    def horizon_rho(self) -> float | None:
        """Radio cilíndrico ecuatorial del horizonte exterior (|A| en el caso acústico)."""
        if self.kind is MetricKind.ACOUSTIC:
            return abs(self.A) if self.A != 0 else None
        rp = self.r_plus
        return None if rp is None else math.sqrt(self.a**2 + rp**2)

    @property
    def ergosphere_rho(self) -> float | None:
        """Radio ecuatorial de la ergoesfera K = 1."""
        if self.kind is MetricKind.ACOUSTIC:
            return math.hypot(self.A, self.B)
        if self.kind is MetricKind.KERR:
            return math.sqrt(4 * self.m**2 + self.a**2)
        return None


class SpatialPoint(BaseModel):
    """(ρ, φ, z) cilíndricas; φ se guarda sin envolver."""
    model_config = ConfigDict(frozen=True)

    rho: float = Field(..., ge=0.0, description="Radio cilíndrico")
    phi: float = Field(0.0, description="Ángulo sin envolver (rad)")
    z: float = Field(0.0, description="Coordenada axial")

    @property
    def phi_mod(self) -> float:
        return self.phi % (2 * math.pi)


class MetricFields(BaseModel):
    model_config = ConfigDict(frozen=True)

    K: float = Field(..., ge=0.0)
    b_rho: float
    b_phi: float
    b_z: float
    r: float = Field(0.0, ge=0.0, description="Radio de Kerr (0 en acústica)")
