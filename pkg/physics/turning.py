# physics/turning.py
"""
Puntos de retorno (ceros de Δ₂) del flujo acústico y certificado de signo para Kerr.
- acoustic_turning_exact      : raíces de la cuadrática en u = 1/ρ²
- acoustic_turning_asymptotic : desarrollo a B grande (etiquetado "expansion, not exact")
- kerr_turning_certificate    : Δ₂⁻(ρ₀) > 0 y Δ₂⁻(ergosfera) < 0 en el ecuador
- turning_report              : reconcilia raíces exactas con eventos TurningPoint
"""

from __future__ import annotations

import math

import numpy as np

from common.errors import DomainError
from domain.energy_models import KerrTurningCertificate, TurningReport
from domain.metric_models import MetricKind, MetricModel, RegionKind, SpatialPoint
from domain.path_models import Branch, EventKind, GeodesicPath
from physics.hamiltonian import branch_root, delta2
from physics.metric import metric_fields, region_classify


def quadratic_roots(a: float, b: float, c: float) -> list[float]:
    """Raíces reales de a·u² + b·u + c = 0 con la forma estable q = −(b + sgn(b)√δ)/2."""
    if a == 0:
        return [] if b == 0 else [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return []
    sign_b = 1.0 if b >= 0 else -1.0
    q = -0.5 * (b + sign_b * math.sqrt(disc))
    if q == 0:
        return [0.0, 0.0]
    return sorted([q / a, c / q])


def _xi0(A: float, B: float, rho0: float, eta, branch: Branch) -> float:
    model = MetricModel.acoustic(A, B)
    return branch_root(model, SpatialPoint(rho=rho0, phi=0.0, z=0.0), eta, branch)


def _eta3(eta) -> tuple[float, float, float]:
    eta_rho, eta_phi, *rest = eta
    return float(eta_rho), float(eta_phi), float(rest[0]) if rest else 0.0


def acoustic_turning_exact(A: float, B: float, rho0: float, eta, branch: Branch) -> list[float]:
    _, xi_phi, xi_z = _eta3(eta)
    if xi_phi == 0:
        raise DomainError("ξ_φ = 0: la ecuación de retorno degenera")
    xi0 = _xi0(A, B, rho0, eta, branch)
    # Δ₂(u) = (A²+B²)ξ_φ² u² + (2ξ₀Bξ_φ − ξ_φ² + A²ξ_z²) u + (ξ₀² − ξ_z²)
    a = (A * A + B * B) * xi_phi * xi_phi
    b = 2.0 * xi0 * B * xi_phi - xi_phi * xi_phi + A * A * xi_z * xi_z
    c = xi0 * xi0 - xi_z * xi_z
    return sorted(1.0 / math.sqrt(u) for u in quadratic_roots(a, b, c) if u > 0)


def acoustic_turning_asymptotic(A: float, B: float, rho0: float, eta, branch: Branch) -> list[float]:
    """
    1/ρ² = 1/ρ₀² + (−e ± |η_φ|√(1−A²/ρ₀²)/ρ₀)/(B η_φ),  e = −(A/ρ₀)η_ρ ± √Δ₁(ρ₀).
    Con Bη_φ < 0 coincide con 1/ρ₀² + e/(B|η_φ|) ∓ √(1−A²/ρ₀²)/(Bρ₀).
    """
    eta_rho, eta_phi, _ = _eta3(eta)
    if B == 0 or eta_phi == 0:
        return []
    d1 = eta_rho * eta_rho + eta_phi * eta_phi / (rho0 * rho0)
    e = -(A / rho0) * eta_rho + branch.sign * math.sqrt(d1)
    s = math.sqrt(max(0.0, 1.0 - A * A / (rho0 * rho0)))
    base = 1.0 / (rho0 * rho0)
    us = [base + (-e + sign * abs(eta_phi) * s / rho0) / (B * eta_phi) for sign in (1.0, -1.0)]
    return sorted(1.0 / math.sqrt(u) for u in us if u > 0)


def kerr_turning_certificate(m: float, a: float, rho0: float) -> KerrTurningCertificate:
    model = MetricModel.kerr(m, a)
    p0 = SpatialPoint(rho=rho0, phi=0.0, z=0.0)
    if region_classify(model, p0) is not RegionKind.ERGOREGION:
        raise DomainError(f"ρ₀={rho0} fuera de la ergorregión (m={m}, a={a})")
    f = metric_fields(model, p0)
    eta = (f.b_rho, rho0 * f.b_phi, 0.0)
    xi0 = branch_root(model, p0, eta, Branch.MINUS)
    ergo = SpatialPoint(rho=model.ergosphere_rho, phi=0.0, z=0.0)
    start = delta2(model, p0, xi0, eta[1], 0.0, Branch.MINUS)
    at_ergo = delta2(model, ergo, xi0, eta[1], 0.0, Branch.MINUS)
    return KerrTurningCertificate(
        m=m, a=a, rho0=rho0, xi0_minus=xi0,
        delta2_start=start, delta2_ergosphere=at_ergo,
        holds=start > 0 and at_ergo < 0,
    )


def residual_scale(xi0: float, xi_phi: float, rho: float) -> float:
    return max(1.0, xi0 * xi0, xi_phi * xi_phi / rho ** 4)


def turning_report(model: MetricModel, rho0: float, eta, branch: Branch,
                   paths: list[GeodesicPath] | None = None) -> TurningReport:
    if model.kind is not MetricKind.ACOUSTIC:
        raise DomainError("turning_report solo aplica a la métrica acústica")
    A, B = model.A, model.B
    _, xi_phi, xi_z = _eta3(eta)
    exact = acoustic_turning_exact(A, B, rho0, eta, branch)
    xi0 = _xi0(A, B, rho0, eta, branch)
    residuals = [
        abs(delta2(model, SpatialPoint(rho=r, phi=0.0, z=0.0), xi0, xi_phi, xi_z, branch))
        / residual_scale(xi0, xi_phi, r)
        for r in exact
    ]
    numeric = [
        e.location.rho
        for path in (paths or []) if path.branch is branch
        for e in path.events_of(EventKind.TURNING_POINT)
    ]
    mismatch = None
    if numeric and exact:
        roots = np.asarray(exact)
        mismatch = max(float(np.min(np.abs(roots - r) / roots)) for r in numeric)
    return TurningReport(
        branch=branch,
        exact_roots=exact,
        asymptotic_roots=acoustic_turning_asymptotic(A, B, rho0, eta, branch),
        numeric_roots=numeric,
        residuals=residuals,
        max_numeric_mismatch=mismatch,
    )
