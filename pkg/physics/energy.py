# physics/energy.py
"""
Integrales de energía en x₀ = 0 (por k²) sobre el soporte del paquete inicial.

    e_plus  =  ∫ λ⁺ √Δ₁ χ₀² ρ dρ dφ dz
    e_minus = −∫ λ⁻ √Δ₁ χ₀² ρ dρ dφ dz
    e_sum   = 2∫ Δ₁/α χ₀² ρ dρ dφ dz

χ₀ = N ∏ exp(−1/(1−uᵢ²)), uᵢ = (yᵢ − y₀ᵢ)/wᵢ. Cada eje se integra con Gauss-Legendre
tras el cambio u = tanh(t), t ∈ [−T, T], que suaviza el borde del soporte.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from common.errors import DomainError, QuadratureNonConvergence
from common.log import log
from domain.energy_models import BumpSpec, EnergyReport
from domain.metric_models import MetricModel, RegionKind, SpatialPoint
from domain.path_models import Branch
from physics.hamiltonian import sym_delta1, sym_roots
from physics.metric import check_point, classify_arrays, metric_jet

STRETCH = 2.0          # T del cambio u = tanh(t)
REFINE_TOL = 1.0e-9    # órdenes n y 2n deben coincidir a este nivel relativo
BOX_EDGE_POINTS = 9    # puntos por borde de la caja de soporte


class _Integrals(NamedTuple):
    e_plus: float
    e_minus: float
    e_sum: float
    lambda_minus_min: float
    in_ergoregion: bool


def stretched_rule(order: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(u, pesos en u, χ²/N² por nodo) para un eje normalizado a [−1, 1]."""
    x, w = leggauss(order)
    t = STRETCH * x
    u = np.tanh(t)
    sech2 = 1.0 / np.cosh(t) ** 2
    weights = STRETCH * w * sech2
    # exp(−1/(1−u²)) con 1−u² = sech²t
    chi2 = np.exp(-2.0 * np.cosh(t) ** 2)
    return u, weights, chi2


def _eta3(eta) -> tuple[float, float, float]:
    eta_rho, eta_phi, *rest = eta
    return float(eta_rho), float(eta_phi), float(rest[0]) if rest else 0.0


def _box_in_ergoregion(model: MetricModel, bump: BumpSpec) -> bool:
    """Esquinas y bordes de la caja de soporte; los nodos no llegan a |u| = 1."""
    c = bump.center
    w_rho, _, w_z = bump.halfwidths
    line = np.linspace(-1.0, 1.0, BOX_EDGE_POINTS)
    rho_sides = (c.rho - w_rho, c.rho + w_rho)
    if bump.planar:
        rho = c.rho + w_rho * line
        z = np.full_like(rho, c.z)
    else:
        z_sides = (c.z - w_z, c.z + w_z)
        rho = np.concatenate([c.rho + w_rho * line, c.rho + w_rho * line,
                              np.full_like(line, rho_sides[0]), np.full_like(line, rho_sides[1])])
        z = np.concatenate([np.full_like(line, z_sides[0]), np.full_like(line, z_sides[1]),
                            c.z + w_z * line, c.z + w_z * line])
    for r_pt, z_pt in zip(rho.tolist(), z.tolist()):
        check_point(model, SpatialPoint(rho=max(r_pt, 0.0), phi=0.0, z=z_pt))
    jet = metric_jet(model, rho, z)
    regions = classify_arrays(model, rho, jet.K, jet.r)
    return bool(np.all(regions == RegionKind.ERGOREGION.value))


def _integrals(model: MetricModel, bump: BumpSpec, eta, order: int) -> _Integrals:
    eta_rho, eta_phi, eta_z = _eta3(eta)
    if eta_rho == 0 and eta_phi == 0 and eta_z == 0:
        raise DomainError("η no puede ser nulo")
    c = bump.center
    w_rho, w_phi, w_z = bump.halfwidths

    u, wu, chi2 = stretched_rule(order)
    rho = c.rho + w_rho * u
    if bump.planar:
        z = np.array([c.z])
        wz = np.array([1.0])
        chi2_z = np.array([1.0])
    else:
        z = c.z + w_z * u
        wz = w_z * wu
        chi2_z = chi2
    box_ok = _box_in_ergoregion(model, bump)

    R, Z = np.meshgrid(rho, z, indexing="ij")
    jet = metric_jet(model, R, Z)
    lam_lo, lam_hi = sym_roots(jet, R, eta_rho, eta_phi, eta_z)
    d1 = sym_delta1(jet, R, eta_rho, eta_phi, eta_z)
    sq = np.sqrt(d1)

    # la integral en φ es separable: el integrando no depende de φ
    phi_factor = math.fsum((w_phi * wu * chi2).tolist())
    weight = (bump.normalization ** 2 * phi_factor
              * np.outer(w_rho * wu * chi2, wz * chi2_z) * R)

    e_plus = math.fsum((weight * lam_hi * sq).ravel().tolist())
    e_minus = -math.fsum((weight * lam_lo * sq).ravel().tolist())
    e_sum = 2.0 * math.fsum((weight * d1 / jet.alpha).ravel().tolist())

    regions = classify_arrays(model, R, jet.K, jet.r)
    return _Integrals(
        e_plus=e_plus, e_minus=e_minus, e_sum=e_sum,
        lambda_minus_min=float(np.min(lam_lo)),
        in_ergoregion=box_ok and bool(np.all(regions == RegionKind.ERGOREGION.value)),
    )


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _converged(model: MetricModel, bump: BumpSpec, eta) -> tuple[_Integrals, float]:
    lo = _integrals(model, bump, eta, bump.order)
    hi = _integrals(model, bump, eta, 2 * bump.order)
    delta = max(_rel(lo.e_plus, hi.e_plus), _rel(lo.e_minus, hi.e_minus), _rel(lo.e_sum, hi.e_sum))
    if delta > REFINE_TOL:
        raise QuadratureNonConvergence(
            f"orden {bump.order} vs {2 * bump.order}: diferencia relativa {delta:.3e}"
        )
    return hi, delta


def energy_branch(model: MetricModel, bump: BumpSpec, eta, branch: Branch) -> float:
    res, _ = _converged(model, bump, eta)
    return res.e_plus if branch is Branch.PLUS else res.e_minus


def energy_sum(model: MetricModel, bump: BumpSpec, eta) -> float:
    res, _ = _converged(model, bump, eta)
    return res.e_sum


def superradiance_report(model: MetricModel, bump: BumpSpec, eta) -> EnergyReport:
    res, delta = _converged(model, bump, eta)
    additivity = abs(res.e_sum - (res.e_plus + res.e_minus)) / abs(res.e_sum)

    reason = None
    if not res.in_ergoregion:
        reason = "soporte fuera de la ergorregión"
    elif res.lambda_minus_min <= 0:
        reason = "λ⁻ <= 0 en parte del soporte"
    superradiant = reason is None and res.e_minus < 0 and res.e_plus > res.e_sum
    if reason is None and not superradiant:
        reason = "e_minus >= 0"

    log("energy", f"e+={res.e_plus:.6g} e-={res.e_minus:.6g} e_sum={res.e_sum:.6g} "
                  f"superradiante={superradiant}")
    return EnergyReport(
        e_plus=res.e_plus, e_minus=res.e_minus, e_sum=res.e_sum,
        additivity_residual=additivity,
        superradiant=superradiant,
        gain=res.e_plus - res.e_sum,
        lambda_minus_min=res.lambda_minus_min,
        support_in_ergoregion=res.in_ergoregion,
        order=bump.order,
        refinement_delta=delta,
        reason=reason,
    )
