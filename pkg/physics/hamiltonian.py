# physics/hamiltonian.py
"""
Álgebra puntual del símbolo
    H = α ξ₀² + 2β ξ₀ P + K P² − S,   P = b̂·ξ̂,  S = ξ̂·ξ̂,  ξ̂ = (ξ_ρ, ξ_φ/ρ, ξ_z)
con (α, β) = (1+K, −K) para Kerr y (1, √K) para el flujo acústico.

Las funciones con prefijo `sym_` trabajan sobre arrays y un FieldJet ya evaluado
(integrador, cuadratura, tests masivos); el resto es la API puntual con validación.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from common.errors import DomainError
from domain.metric_models import MetricKind, MetricModel, SpatialPoint
from domain.path_models import Branch, Covector
from physics.metric import FieldJet, check_point, metric_jet


class HGradient(NamedTuple):
    d_xi0: np.ndarray
    d_xi_rho: np.ndarray
    d_xi_phi: np.ndarray
    d_xi_z: np.ndarray
    d_rho: np.ndarray
    d_phi: np.ndarray
    d_z: np.ndarray


# ---------- núcleo vectorizado ----------

def sym_parts(jet: FieldJet, rho, xi_rho, xi_phi, xi_z):
    """(P, S) = (b̂·ξ̂, ξ̂·ξ̂)."""
    xp = xi_phi / rho
    P = jet.b_rho * xi_rho + jet.b_phi * xp + jet.b_z * xi_z
    S = xi_rho * xi_rho + xp * xp + xi_z * xi_z
    return P, S


def sym_h(jet: FieldJet, rho, xi0, xi_rho, xi_phi, xi_z):
    P, S = sym_parts(jet, rho, xi_rho, xi_phi, xi_z)
    return jet.alpha * xi0 * xi0 + 2.0 * jet.beta * xi0 * P + jet.K * P * P - S


def sym_h_scale(jet: FieldJet, rho, xi0, xi_rho, xi_phi, xi_z):
    """Suma de módulos de los términos de H: escala natural de su error de redondeo."""
    P, S = sym_parts(jet, rho, xi_rho, xi_phi, xi_z)
    return (np.abs(jet.alpha * xi0 * xi0) + np.abs(2.0 * jet.beta * xi0 * P)
            + jet.K * P * P + S)


def sym_delta1(jet: FieldJet, rho, xi_rho, xi_phi, xi_z):
    P, S = sym_parts(jet, rho, xi_rho, xi_phi, xi_z)
    return jet.beta * jet.beta * P * P - jet.alpha * (jet.K * P * P - S)


def sym_roots(jet: FieldJet, rho, xi_rho, xi_phi, xi_z):
    """(λ⁻, λ⁺) raíces de H en ξ₀, con la forma estable (método q)."""
    P, S = sym_parts(jet, rho, xi_rho, xi_phi, xi_z)
    half_b = jet.beta * P
    c = jet.K * P * P - S
    sq = np.sqrt(half_b * half_b - jet.alpha * c)
    q = -(half_b + np.where(half_b >= 0, sq, -sq))
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = q / jet.alpha
        r2 = np.where(q != 0, c / q, 0.0)
    return np.minimum(r1, r2), np.maximum(r1, r2)


def sym_gradient(jet: FieldJet, rho, xi0, xi_rho, xi_phi, xi_z) -> HGradient:
    P, _ = sym_parts(jet, rho, xi_rho, xi_phi, xi_z)
    G = 2.0 * (jet.beta * xi0 + jet.K * P)
    inv = 1.0 / rho

    dP_drho = (jet.db_rho_drho * xi_rho
               + (jet.db_phi_drho * inv - jet.b_phi * inv * inv) * xi_phi
               + jet.db_z_drho * xi_z)
    dP_dz = jet.db_rho_dz * xi_rho + jet.db_phi_dz * xi_phi * inv + jet.db_z_dz * xi_z

    d_rho = (jet.dalpha_drho * xi0 * xi0 + 2.0 * jet.dbeta_drho * xi0 * P
             + jet.dK_drho * P * P + G * dP_drho + 2.0 * xi_phi * xi_phi * inv ** 3)
    d_z = (jet.dalpha_dz * xi0 * xi0 + 2.0 * jet.dbeta_dz * xi0 * P
           + jet.dK_dz * P * P + G * dP_dz)

    return HGradient(
        d_xi0=2.0 * jet.alpha * xi0 + 2.0 * jet.beta * P,
        d_xi_rho=G * jet.b_rho - 2.0 * xi_rho,
        d_xi_phi=G * jet.b_phi * inv - 2.0 * xi_phi * inv * inv,
        d_xi_z=G * jet.b_z - 2.0 * xi_z,
        d_rho=d_rho,
        d_phi=np.zeros_like(d_rho),
        d_z=d_z,
    )


def sym_delta2(model: MetricModel, jet: FieldJet, rho, xi0, xi_phi, xi_z):
    """Discriminante radial en su forma explícita por backend."""
    xp = xi_phi / rho
    if model.kind is MetricKind.ACOUSTIC:
        # (ξ₀ + Bξ_φ/ρ²)² + (A²/ρ² − 1)(ξ_φ²/ρ² + ξ_z²)
        y = xi0 + model.B * xi_phi / (rho * rho)
        return y * y + (model.A ** 2 / (rho * rho) - 1.0) * (xp * xp + xi_z * xi_z)
    x = -xi0 + jet.b_phi * xp + jet.b_z * xi_z
    w = xi0 * xi0 - xi_z * xi_z - xp * xp
    return jet.K * x * x + (1.0 - jet.K * jet.b_rho ** 2) * w


def sym_delta3(jet: FieldJet, rho, xi0, xi_rho, xi_phi):
    """Análogo axial de Δ₂ (intercambio ρ ↔ z)."""
    xp = xi_phi / rho
    x = -xi0 + jet.b_rho * xi_rho + jet.b_phi * xp
    w = xi0 * xi0 - xi_rho * xi_rho - xp * xp
    return jet.K * x * x + (1.0 - jet.K * jet.b_z ** 2) * w


# ---------- API puntual ----------

def _jet_at(model: MetricModel, p: SpatialPoint) -> FieldJet:
    check_point(model, p)
    return metric_jet(model, p.rho, p.z)


def _spatial(xi) -> tuple[float, float, float]:
    if isinstance(xi, Covector):
        return xi.spatial
    xr, xp, *rest = xi
    return float(xr), float(xp), float(rest[0]) if rest else 0.0


def eval_H(model: MetricModel, p: SpatialPoint, xi: Covector) -> float:
    jet = _jet_at(model, p)
    return float(sym_h(jet, p.rho, xi.xi0, xi.xi_rho, xi.xi_phi, xi.xi_z))


def lambda_roots(model: MetricModel, p: SpatialPoint, xi_spatial) -> tuple[float, float]:
    """(λ⁻, λ⁺) con λ⁻ < λ⁺; ξ_spatial = (ξ_ρ, ξ_φ, ξ_z) o un Covector."""
    xr, xp, xz = _spatial(xi_spatial)
    if xr == 0 and xp == 0 and xz == 0:
        raise DomainError("λ± requiere ξ espacial no nulo")
    jet = _jet_at(model, p)
    lo, hi = sym_roots(jet, p.rho, xr, xp, xz)
    return float(lo), float(hi)


def branch_root(model: MetricModel, p: SpatialPoint, xi_spatial, branch: Branch) -> float:
    lo, hi = lambda_roots(model, p, xi_spatial)
    return hi if branch is Branch.PLUS else lo


def delta1(model: MetricModel, p: SpatialPoint, xi) -> float:
    jet = _jet_at(model, p)
    xr, xp, xz = _spatial(xi)
    return float(sym_delta1(jet, p.rho, xr, xp, xz))


def delta2(model: MetricModel, p: SpatialPoint, xi0: float, xi_phi: float, xi_z: float,
           branch: Branch | None = None) -> float:
    """
    Δ₂ evaluado con el ξ₀ conservado de la rama (`branch` solo etiqueta el valor).
    En la capa de masa Δ₂ = (∂H/∂ξ_ρ / 2)²; sus ceros son los puntos de retorno.
    """
    jet = _jet_at(model, p)
    return float(sym_delta2(model, jet, p.rho, xi0, xi_phi, xi_z))


def delta3(model: MetricModel, p: SpatialPoint, xi0: float, xi_rho: float, xi_phi: float,
           branch: Branch | None = None) -> float:
    if model.kind is MetricKind.ACOUSTIC:
        raise DomainError("Δ₃ no aplica a la métrica acústica plana")
    jet = _jet_at(model, p)
    return float(sym_delta3(jet, p.rho, xi0, xi_rho, xi_phi))


def grad_H(model: MetricModel, p: SpatialPoint, xi: Covector) -> tuple[float, ...]:
    """(∂H/∂ξ₀, ∂H/∂ξ_ρ, ∂H/∂ξ_φ, ∂H/∂ξ_z, ∂H/∂ρ, ∂H/∂φ, ∂H/∂z)."""
    jet = _jet_at(model, p)
    g = sym_gradient(jet, p.rho, xi.xi0, xi.xi_rho, xi.xi_phi, xi.xi_z)
    return tuple(float(v) for v in g)
