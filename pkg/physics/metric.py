# physics/metric.py
"""
Núcleo métrico: familia H = α ξ₀² + 2β ξ₀ (b̂·ξ̂) + K (b̂·ξ̂)² − |ξ̂|².
- kerr_r(ρ, z, a)       : radio de Kerr-Schild en forma cerrada.
- metric_fields(model,p): (K, b̂, r) con chequeo de degeneración.
- metric_jet(model,ρ,z) : campos + derivadas espaciales (vectorizado, sin chequeos),
                          lo usan el integrador y la cuadratura.
- region_classify       : exterior / ergorregión / entre horizontes / ...
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from common.errors import DegeneratePoint, DomainError
from domain.metric_models import MetricFields, MetricKind, MetricModel, RegionKind, SpatialPoint

RING_DEGENERACY = 1.0e-8     # (ρ−a)²+z² < RING_DEGENERACY·a²
AXIS_DEGENERACY = 1.0e-10    # ρ < AXIS_DEGENERACY (acústica)


class FieldJet(NamedTuple):
    """Campos y derivadas en (ρ, z). α, β fijan el acoplamiento temporal del símbolo."""
    K: np.ndarray
    b_rho: np.ndarray
    b_phi: np.ndarray
    b_z: np.ndarray
    r: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    dK_drho: np.ndarray
    dK_dz: np.ndarray
    db_rho_drho: np.ndarray
    db_rho_dz: np.ndarray
    db_phi_drho: np.ndarray
    db_phi_dz: np.ndarray
    db_z_drho: np.ndarray
    db_z_dz: np.ndarray
    dalpha_drho: np.ndarray
    dalpha_dz: np.ndarray
    dbeta_drho: np.ndarray
    dbeta_dz: np.ndarray
    dr_drho: np.ndarray
    dr_dz: np.ndarray


# ---------- Kerr ----------

def _kerr_r2(rho, z, a):
    d = rho * rho + z * z - a * a
    root = np.sqrt(d * d + 4.0 * a * a * z * z)
    # raíz positiva en r²; para d < 0 se usa la forma conjugada
    with np.errstate(divide="ignore", invalid="ignore"):
        alt = np.where(root - d > 0, 2.0 * a * a * z * z / (root - d), 0.0)
    return np.where(d >= 0, 0.5 * (d + root), alt)


def kerr_r(rho: float, z: float, a: float) -> float:
    """r >= 0 con ρ²/(r²+a²) + z²/r² = 1."""
    if rho < 0 or a < 0:
        raise DomainError(f"kerr_r requiere ρ >= 0 y a >= 0 (ρ={rho}, a={a})")
    if a > 0 and z == 0 and rho <= a:
        raise DegeneratePoint(f"(ρ={rho}, z=0) está sobre el disco r=0 (a={a})")
    return float(math.sqrt(float(_kerr_r2(rho, z, a))))


def _kerr_jet(m: float, a: float, rho, z) -> FieldJet:
    rho = np.asarray(rho, dtype=float)
    z = np.asarray(z, dtype=float)
    r = np.sqrt(_kerr_r2(rho, z, a))
    r2 = r * r
    s2 = r2 + a * a
    q = r2 * r2 + a * a * z * z

    # derivadas de r por diferenciación implícita de ρ²/(r²+a²) + z²/r² = 1
    dr_drho = rho * r2 * r / q
    dr_dz = z * r * s2 / q

    K = 2.0 * m * r2 * r / q
    dK_dr = 2.0 * m * r2 * (3.0 * a * a * z * z - r2 * r2) / (q * q)
    dK_dz_r = -4.0 * m * a * a * z * r2 * r / (q * q)
    dK_drho = dK_dr * dr_drho
    dK_dz = dK_dr * dr_dz + dK_dz_r

    f = r / s2
    df = (a * a - r2) / (s2 * s2)
    g = a / s2
    dg = -2.0 * a * r / (s2 * s2)

    b_rho = rho * f
    b_phi = rho * g
    b_z = z / r

    ones = np.ones_like(K)
    return FieldJet(
        K=K, b_rho=b_rho, b_phi=b_phi, b_z=b_z, r=r,
        alpha=1.0 + K, beta=-K,
        dK_drho=dK_drho, dK_dz=dK_dz,
        db_rho_drho=f + rho * df * dr_drho, db_rho_dz=rho * df * dr_dz,
        db_phi_drho=g + rho * dg * dr_drho, db_phi_dz=rho * dg * dr_dz,
        db_z_drho=-z * dr_drho / r2, db_z_dz=1.0 / r - z * dr_dz / r2,
        dalpha_drho=dK_drho, dalpha_dz=dK_dz,
        dbeta_drho=-dK_drho, dbeta_dz=-dK_dz,
        dr_drho=dr_drho * ones, dr_dz=dr_dz * ones,
    )


# ---------- acústica ----------

def _acoustic_jet(A: float, B: float, rho) -> FieldJet:
    rho = np.asarray(rho, dtype=float)
    speed = math.hypot(A, B)
    K = speed * speed / (rho * rho)
    beta = speed / rho
    zero = np.zeros_like(K)
    return FieldJet(
        K=K, b_rho=zero + A / speed, b_phi=zero + B / speed, b_z=zero, r=zero,
        alpha=zero + 1.0, beta=beta,
        dK_drho=-2.0 * K / rho, dK_dz=zero,
        db_rho_drho=zero, db_rho_dz=zero, db_phi_drho=zero, db_phi_dz=zero,
        db_z_drho=zero, db_z_dz=zero,
        dalpha_drho=zero, dalpha_dz=zero,
        dbeta_drho=-beta / rho, dbeta_dz=zero,
        dr_drho=zero, dr_dz=zero,
    )


def _flat_jet(rho, z) -> FieldJet:
    zero = np.zeros_like(np.asarray(rho, dtype=float) + np.asarray(z, dtype=float))
    return FieldJet(
        K=zero, b_rho=zero + 1.0, b_phi=zero, b_z=zero, r=zero,
        alpha=zero + 1.0, beta=zero,
        dK_drho=zero, dK_dz=zero,
        db_rho_drho=zero, db_rho_dz=zero, db_phi_drho=zero, db_phi_dz=zero,
        db_z_drho=zero, db_z_dz=zero,
        dalpha_drho=zero, dalpha_dz=zero, dbeta_drho=zero, dbeta_dz=zero,
        dr_drho=zero, dr_dz=zero,
    )


def metric_jet(model: MetricModel, rho, z) -> FieldJet:
    """Campos + derivadas; acepta escalares o arrays. No valida degeneraciones."""
    if model.kind is MetricKind.KERR:
        return _kerr_jet(model.m, model.a, rho, z)
    if model.kind is MetricKind.ACOUSTIC:
        return _acoustic_jet(model.A, model.B, rho)
    return _flat_jet(rho, z)


# ---------- API puntual ----------

def check_point(model: MetricModel, p: SpatialPoint) -> None:
    if model.kind is MetricKind.KERR:
        a = model.a
        if a > 0:
            if (p.rho - a) ** 2 + p.z ** 2 < RING_DEGENERACY * a * a:
                raise DegeneratePoint(f"punto demasiado cerca del anillo ρ=a (ρ={p.rho}, z={p.z})")
            if p.z == 0 and p.rho <= a:
                raise DegeneratePoint(f"(ρ={p.rho}, z=0) está sobre el disco r=0")
        elif p.rho == 0 and p.z == 0:
            raise DegeneratePoint("r = 0 en Kerr con a = 0")
    elif model.kind is MetricKind.ACOUSTIC and p.rho < AXIS_DEGENERACY:
        raise DegeneratePoint(f"ρ={p.rho} sobre el eje del flujo acústico")


def metric_fields(model: MetricModel, p: SpatialPoint) -> MetricFields:
    check_point(model, p)
    jet = metric_jet(model, p.rho, p.z)
    return MetricFields(
        K=float(jet.K), b_rho=float(jet.b_rho), b_phi=float(jet.b_phi),
        b_z=float(jet.b_z), r=float(jet.r),
    )


def _label(shape, masks: list[tuple[np.ndarray, RegionKind]], default: RegionKind) -> np.ndarray:
    """Primera máscara que aplica gana; resto -> default."""
    out = np.full(shape, default.value, dtype=object)
    done = np.zeros(shape, dtype=bool)
    for mask, kind in masks:
        sel = np.broadcast_to(mask, shape) & ~done
        out[sel] = kind.value
        done |= sel
    return out


def classify_arrays(model: MetricModel, rho, K, r) -> np.ndarray:
    """Clasificación vectorizada a partir de (ρ, K, r) ya evaluados."""
    rho, K, r = np.broadcast_arrays(np.asarray(rho, dtype=float), np.asarray(K, dtype=float),
                                    np.asarray(r, dtype=float))
    shape = rho.shape
    if model.kind is MetricKind.ACOUSTIC:
        ergo = math.hypot(model.A, model.B)
        return _label(shape, [(rho >= ergo, RegionKind.EXTERIOR),
                              (rho > abs(model.A), RegionKind.ERGOREGION)],
                      RegionKind.BETWEEN_HORIZONS)
    if model.kind is MetricKind.KERR:
        if model.a < model.m:
            return _label(shape, [(r < model.r_minus, RegionKind.INSIDE_INNER),
                                  (r < model.r_plus, RegionKind.BETWEEN_HORIZONS),
                                  (K > 1.0, RegionKind.ERGOREGION)],
                          RegionKind.EXTERIOR)
        return _label(shape, [(K > 1.0, RegionKind.ERGOREGION),
                              (r < model.m, RegionKind.NO_HORIZON_INTERIOR)],
                      RegionKind.EXTERIOR)
    return _label(shape, [], RegionKind.EXTERIOR)


def region_classify(model: MetricModel, p: SpatialPoint) -> RegionKind:
    f = metric_fields(model, p)
    return RegionKind(classify_arrays(model, p.rho, f.K, f.r).item())
