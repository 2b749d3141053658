# domain/energy_models.py
"""
Modelos Pydantic de la capa de energía y de puntos de retorno.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from domain.metric_models import SpatialPoint
from domain.path_models import Branch


class BumpSpec(BaseModel):
    """Soporte del paquete inicial: caja centrada en y₀ con semianchos (w_ρ, w_φ, w_z)."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    center: SpatialPoint
    halfwidths: tuple[float, float, float | None] = Field(
        ..., description="(w_ρ, w_φ, w_z); w_z=None integra en el plano (por unidad de z)"
    )
    normalization: float = Field(1.0, gt=0.0)
    order: int = Field(32, ge=4, description="Nodos de Gauss-Legendre por eje")

    @property
    def planar(self) -> bool:
        return self.halfwidths[2] is None

    def scaled(self, factor: float) -> "BumpSpec":
        w_rho, w_phi, w_z = self.halfwidths
        return self.model_copy(update={
            "halfwidths": (w_rho * factor, w_phi * factor, None if w_z is None else w_z * factor)
        })


class EnergyReport(BaseModel):
    """Energías por k² del dato inicial; superradiant = e_minus < 0 y e_plus > e_sum."""
    e_plus: float
    e_minus: float
    e_sum: float
    additivity_residual: float
    superradiant: bool
    gain: float = Field(..., description="e_plus − e_sum")
    lambda_minus_min: float = Field(..., description="mín λ⁻ sobre los nodos del soporte")
    support_in_ergoregion: bool
    order: int
    refinement_delta: float = Field(..., description="Diferencia relativa orden n vs 2n")
    reason: str | None = None
    note: str = "leading order in k; corrections O(1/k) not included"


class TurningReport(BaseModel):
    branch: Branch
    exact_roots: list[float]
    asymptotic_roots: list[float]
    asymptotic_tag: str = "expansion, not exact"
    numeric_roots: list[float] = Field(default_factory=list)
    residuals: list[float] = Field(default_factory=list, description="|Δ₂| en cada raíz exacta")
    max_numeric_mismatch: float | None = Field(
        None, description="Máximo error relativo evento numérico vs raíz exacta más cercana"
    )


class KerrTurningCertificate(BaseModel):
    m: float
    a: float
    rho0: float
    xi0_minus: float
    delta2_start: float
    delta2_ergosphere: float
    holds: bool
