# physics/audits.py
"""
Auditorías por muestra de las cotas de los discriminantes dentro del horizonte (Kerr).

Sobre la capa de masa  Δ₂ = (K b_ρ X − (1−K b_ρ²) ξ_ρ)² − (K b_ρ² − 1)·H, con
X = −ξ₀ + b_φ ξ_φ/ρ + b_z ξ_z; la desigualdad triangular inversa da

    Δ₂ ≥ (1 − K b_ρ²)·I₁²,   I₁ = | |K b_ρ X|/√(1−K b_ρ²) − √(1−K b_ρ²)|ξ_ρ| |

donde 0 < K b_ρ² < 1. Δ₃ con I₂ es lo mismo intercambiando ρ ↔ z.
"""

from __future__ import annotations

import numpy as np

from common.errors import AuditViolation
from common.log import log
from domain.metric_models import MetricKind
from domain.outcome_models import AuditRecord
from domain.path_models import GeodesicPath, StopSpec
from physics.hamiltonian import sym_delta2, sym_delta3, sym_h
from physics.integrator import shell_residuals
from physics.metric import metric_jet

AUDIT_TOL = 1.0e-9
SHELL_TOL = StopSpec().h_tol    # solo muestras sobre la capa de masa


def _record(name: str, lhs, rhs, h, coupling, mask) -> AuditRecord:
    lhs, rhs, h, coupling = (np.asarray(v)[mask] for v in (lhs, rhs, h, coupling))
    if lhs.size == 0:
        return AuditRecord(name=name, checked_samples=0, min_margin=0.0, passed=True)
    scale = 1.0 + np.abs(lhs) + np.abs(rhs)
    margin = (lhs - rhs + np.abs(h * (coupling - 1.0))) / scale
    worst = float(np.min(margin))
    return AuditRecord(name=name, checked_samples=int(lhs.size), min_margin=worst,
                       passed=worst >= -AUDIT_TOL)


def audit_path(path: GeodesicPath, raise_on_failure: bool = True,
               shell_tol: float = SHELL_TOL) -> list[AuditRecord]:
    """Las cotas valen sobre H = 0: se auditan las muestras con |H| <= shell_tol·(1 + escala)."""
    if path.model.kind is not MetricKind.KERR:
        return []
    df = path.to_frame()
    rho, z = df["rho"].to_numpy(), df["z"].to_numpy()
    xi0, xr, xp, xz = (df[c].to_numpy() for c in ("xi0", "xi_rho", "xi_phi", "xi_z"))
    with np.errstate(all="ignore"):
        jet = metric_jet(path.model, rho, z)
        h = sym_h(jet, rho, xi0, xr, xp, xz)

        k_rho = jet.K * jet.b_rho ** 2
        x_rho = -xi0 + jet.b_phi * xp / rho + jet.b_z * xz
        s_rho = np.sqrt(np.clip(1.0 - k_rho, 0.0, None))
        i1 = np.abs(np.abs(jet.K * jet.b_rho * x_rho) / s_rho - s_rho * np.abs(xr))
        d2 = sym_delta2(path.model, jet, rho, xi0, xp, xz)

        k_z = jet.K * jet.b_z ** 2
        x_z = -xi0 + jet.b_rho * xr + jet.b_phi * xp / rho
        s_z = np.sqrt(np.clip(1.0 - k_z, 0.0, None))
        i2 = np.abs(np.abs(jet.K * jet.b_z * x_z) / s_z - s_z * np.abs(xz))
        d3 = sym_delta3(jet, rho, xi0, xr, xp)
    on_shell = shell_residuals(path) <= shell_tol

    records = [
        _record("delta2_lower_bound", d2, (1.0 - k_rho) * i1 ** 2, h, k_rho,
                on_shell & (k_rho > 0) & (k_rho < 1) & np.isfinite(i1)),
        _record("delta3_lower_bound", d3, (1.0 - k_z) * i2 ** 2, h, k_z,
                on_shell & (k_z > 0) & (k_z < 1) & np.isfinite(i2)),
    ]
    for rec in records:
        log("audit", f"{path.branch.value}/{path.direction.value} {rec.name}: "
                     f"{rec.checked_samples} muestras, margen mín {rec.min_margin:.3e}")
        if raise_on_failure and not rec.passed:
            raise AuditViolation(f"{rec.name} violada ({path.branch.value}): margen {rec.min_margin:.3e}")
    return records
