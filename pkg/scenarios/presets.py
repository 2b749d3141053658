# scenarios/presets.py
"""
Datos iniciales con nombre y sus condiciones previas (gates).

PRESETS: nombre -> constructor(model, rho0, z0, **opts) -> InitialData
  eq-4.9      acústica A<0: η_ρ = −2|A|/ρ₀, η_φ = −ρ₀√(1−4A²/ρ₀²)
  eq-5.2      acústica B<|A|: η_ρ = |A|/ρ₀, η_φ = −B
  eq-7.5      Kerr: η = (b_ρ(y₀), ρ₀·b_φ(y₀), 0) evaluado en el ecuador
  remark-4.2  acústica A=0: η_ρ = −ε, η_φ = −ρ₀√(1−ε²)
  explicit    η dado por el usuario
"""

from __future__ import annotations

import math
from typing import Callable

from common.errors import DomainError, GateFailed
from common.log import log
from domain.metric_models import MetricKind, MetricModel, RegionKind, SpatialPoint
from domain.path_models import InitialData
from physics.metric import metric_fields, region_classify

NAKED_ETA_RHO = 0.1   # |η_ρ| por defecto en remark-4.2


def _require(model: MetricModel, kind: MetricKind, preset: str) -> None:
    if model.kind is not kind:
        raise DomainError(f"el preset {preset} requiere métrica {kind.value}, no {model.kind.value}")


def eq_4_9(model: MetricModel, rho0: float, z0: float = 0.0, **_) -> InitialData:
    _require(model, MetricKind.ACOUSTIC, "eq-4.9")
    A = model.A
    if rho0 <= 2 * abs(A):
        raise GateFailed(f"eq-4.9 requiere ρ₀ > 2|A| (ρ₀={rho0}, A={A})")
    eta = (-2 * abs(A) / rho0, -rho0 * math.sqrt(1 - 4 * A * A / rho0 ** 2), 0.0)
    return InitialData(model=model, y0=SpatialPoint(rho=rho0, phi=0.0, z=z0), eta=eta, preset="eq-4.9")


def eq_5_2(model: MetricModel, rho0: float, z0: float = 0.0, **_) -> InitialData:
    _require(model, MetricKind.ACOUSTIC, "eq-5.2")
    eta = (abs(model.A) / rho0, -model.B, 0.0)
    return InitialData(model=model, y0=SpatialPoint(rho=rho0, phi=0.0, z=z0), eta=eta, preset="eq-5.2")


def eq_7_5(model: MetricModel, rho0: float, z0: float = 0.0, **_) -> InitialData:
    _require(model, MetricKind.KERR, "eq-7.5")
    # η se fija con los campos ecuatoriales aunque y₀ esté fuera del plano
    f = metric_fields(model, SpatialPoint(rho=rho0, phi=0.0, z=0.0))
    eta = (f.b_rho, rho0 * f.b_phi, 0.0)
    return InitialData(model=model, y0=SpatialPoint(rho=rho0, phi=0.0, z=z0), eta=eta, preset="eq-7.5")


def remark_4_2(model: MetricModel, rho0: float, z0: float = 0.0,
               eta_rho: float = -NAKED_ETA_RHO, **_) -> InitialData:
    _require(model, MetricKind.ACOUSTIC, "remark-4.2")
    if model.A != 0:
        raise DomainError("remark-4.2 requiere A = 0")
    if not -1.0 < eta_rho < 0.0:
        raise DomainError(f"remark-4.2 requiere −1 < η_ρ < 0 (η_ρ={eta_rho})")
    eta = (eta_rho, -rho0 * math.sqrt(1 - eta_rho * eta_rho), 0.0)
    return InitialData(model=model, y0=SpatialPoint(rho=rho0, phi=0.0, z=z0), eta=eta, preset="remark-4.2")


def explicit(model: MetricModel, rho0: float, z0: float = 0.0, eta=None, **_) -> InitialData:
    if eta is None:
        raise DomainError("el preset explicit requiere η")
    eta_rho, eta_phi, *rest = eta
    eta3 = (float(eta_rho), float(eta_phi), float(rest[0]) if rest else 0.0)
    return InitialData(model=model, y0=SpatialPoint(rho=rho0, phi=0.0, z=z0), eta=eta3, preset="explicit")


PRESETS: dict[str, Callable[..., InitialData]] = {
    "eq-4.9": eq_4_9,
    "eq-5.2": eq_5_2,
    "eq-7.5": eq_7_5,
    "remark-4.2": remark_4_2,
    "explicit": explicit,
}


def build_initial(preset: str, model: MetricModel, rho0: float, z0: float = 0.0, **opts) -> InitialData:
    try:
        ctor = PRESETS[preset]
    except KeyError:
        raise DomainError(f"preset desconocido: {preset}") from None
    return ctor(model, rho0, z0, **opts)


# ---------- gates ----------

def superradiant_threshold(A: float, rho0: float) -> float:
    """B mínimo para ξ₀⁻ > 0 con los datos eq-4.9."""
    return rho0 * (1 + 2 * A * A / rho0 ** 2) / math.sqrt(1 - 4 * A * A / rho0 ** 2)


def gate_acoustic_superradiant(A: float, B: float, rho0: float) -> float:
    if A >= 0:
        raise GateFailed(f"se requiere A < 0 (A={A})")
    if rho0 <= 2 * abs(A):
        raise GateFailed(f"se requiere ρ₀ > 2|A| (ρ₀={rho0}, A={A})")
    threshold = superradiant_threshold(A, rho0)
    if B <= threshold:
        raise GateFailed(f"B={B} no supera el umbral {threshold:.6g}")
    log("gate", f"acústica superradiante: umbral {threshold:.6g} < B={B}")
    return threshold


def gate_acoustic_naked(B: float, rho0: float, eta_rho: float) -> float:
    """(B²−ρ₀²)η_φ²/ρ₀⁴ > η_ρ²; devuelve el margen."""
    if B <= 0:
        raise GateFailed(f"se requiere B > 0 (B={B})")
    eta_phi2 = rho0 * rho0 * (1 - eta_rho * eta_rho)
    margin = (B * B - rho0 * rho0) * eta_phi2 / rho0 ** 4 - eta_rho * eta_rho
    if margin <= 0:
        raise GateFailed(f"ρ₀={rho0} no cumple la condición de ξ₀⁻ > 0 (margen {margin:.3e})")
    return margin


def gate_acoustic_shortlived(A: float, B: float, rho0: float) -> None:
    if not (A < 0 and 0 < B < abs(A)):
        raise GateFailed(f"se requiere A < 0 y 0 < B < |A| (A={A}, B={B})")
    if not abs(A) < rho0 < math.hypot(A, B):
        raise GateFailed(f"ρ₀={rho0} fuera de (|A|, √(A²+B²)) = ({abs(A)}, {math.hypot(A, B):.6g})")


def gate_kerr_ergoregion(model: MetricModel, rho0: float) -> None:
    p = SpatialPoint(rho=rho0, phi=0.0, z=0.0)
    if model.a <= model.m:
        lo, hi = model.horizon_rho, model.ergosphere_rho
        if not lo < rho0 < hi:
            raise GateFailed(f"ρ₀={rho0} fuera de la banda ({lo:.6f}, {hi:.6f})")
    elif region_classify(model, p) is not RegionKind.ERGOREGION:
        raise GateFailed(f"ρ₀={rho0} fuera de la ergorregión (a={model.a})")
