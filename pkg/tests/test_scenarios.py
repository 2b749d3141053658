"""
Tests para scenarios: compuertas de parámetros, registro y corridas completas de cada escenario.
Finalidad: Verificar los chequeos numéricos que reporta cada escenario y su clasificación por rama.
Las corridas completas llevan la marca `slow`.
"""

import math

import numpy as np
import pytest

from common.errors import DomainError, GateFailed
from domain.metric_models import MetricModel
from domain.outcome_models import Classification, FitLaw
from domain.path_models import Branch, Direction, StopSpec
from physics.audits import audit_path
from physics.integrator import trace
from scenarios import registry
from scenarios.acoustic import run_acoustic_shortlived, run_acoustic_superradiant, run_white_hole
from scenarios.kerr import run_kerr_equatorial, run_kerr_extremal_and_naked, run_kerr_offequatorial
from scenarios.presets import gate_kerr_ergoregion, superradiant_threshold


# ---------- compuertas ----------

def test_superradiant_gate_below_threshold():
    assert superradiant_threshold(-1.0, 2.5) == pytest.approx(5.5)
    with pytest.raises(GateFailed):
        run_acoustic_superradiant(A=-1.0, B=5.0, rho0=2.5)


def test_superradiant_gate_needs_rho0_beyond_twice_horizon():
    with pytest.raises(GateFailed):
        run_acoustic_superradiant(A=-1.0, B=10.0, rho0=1.5)


def test_shortlived_gate_rejects_large_b():
    with pytest.raises(GateFailed):
        run_acoustic_shortlived(A=-2.0, B=3.0, rho0=2.1)


def test_kerr_gates():
    with pytest.raises(GateFailed):
        run_kerr_equatorial(m=1.0, a=1.0)
    with pytest.raises(GateFailed):
        run_kerr_offequatorial(z0=0.0)
    with pytest.raises(GateFailed):
        run_kerr_extremal_and_naked(a_grid=(1.2, 0.9))
    with pytest.raises(GateFailed):
        gate_kerr_ergoregion(MetricModel.kerr(1.0, 0.8), 2.5)


def test_white_hole_requires_positive_a():
    with pytest.raises(DomainError):
        run_white_hole(A=-1.0, B=10.0)


# ---------- registro ----------

def test_unknown_scenario():
    with pytest.raises(DomainError) as exc:
        registry.get_scenario("no-existe")
    assert "acoustic-superradiant" in str(exc.value)


def test_run_scenario_filters_params(mocker):
    """
    Objetivo: run_scenario descarta claves que la función no acepta y los valores None.
    """
    calls = []

    def fake(m: float = 1.0, a: float = 0.8, rho0: float = 2.0):
        calls.append(dict(m=m, a=a, rho0=rho0))
        return "ok"

    mocker.patch.dict(registry.SCENARIOS, {"kerr-equatorial": fake})
    assert registry.run_scenario("kerr-equatorial", kind="kerr", m=1.0, a=0.8, rho0=None, B=10.0) == "ok"
    assert calls == [dict(m=1.0, a=0.8, rho0=2.0)]


def test_scenario_params():
    assert registry.scenario_params("acoustic-naked")[:3] == ("B", "rho0", "eta_rho")
    assert "z0" in registry.scenario_params("kerr-offequatorial")


# ---------- acústico ----------

@pytest.mark.slow
def test_acoustic_superradiant_scenario():
    """
    Objetivo: A=−1, B=10, ρ₀=2.5: Plus escapa de forma monótona, Minus cruza ρ=1,
    y hacia atrás los retornos numéricos coinciden con las raíces exactas.
    """
    out = run_acoustic_superradiant()
    c = out.checks
    assert c["threshold"] == pytest.approx(5.5)
    assert c["xi0_minus"] == pytest.approx(1.08, rel=1e-12)
    assert c["plus_forward_monotone"] is True
    assert c["minus_horizon_x0"] > 0
    assert c["drho_dx0_plus_at_0"] == pytest.approx(0.4, rel=1e-10)
    assert c["drho_dx0_minus_at_0"] == pytest.approx(-1.2, rel=1e-10)
    assert c["xi0_drift"] < 1e-12
    assert c["h_residual_max"] < 1e-8

    assert out.branch(Branch.PLUS, Direction.FORWARD).classification is Classification.ESCAPES_TO_INFINITY
    assert out.branch(Branch.MINUS, Direction.FORWARD).classification is Classification.CROSSES_OUTER_HORIZON
    for report in out.turning:
        assert report.asymptotic_tag == "expansion, not exact"
        if report.numeric_roots:
            assert report.max_numeric_mismatch < 1e-7


@pytest.mark.slow
def test_acoustic_shortlived_scenario():
    out = run_acoustic_shortlived()
    assert out.checks["xi0_minus"] > 0
    for branch in (Branch.PLUS, Branch.MINUS):
        assert out.branch(branch, Direction.FORWARD).classification is Classification.CROSSES_OUTER_HORIZON
    plus = next(r for r in out.turning if r.branch is Branch.PLUS)
    assert plus.exact_roots == []


@pytest.mark.slow
def test_acoustic_naked_scenario():
    """
    Objetivo: sin horizonte, Minus llega a ρ=0 con dρ/dx₀ → −1; dφ/dρ ∼ −B/ρ² (pendiente log-log −2).
    """
    out = registry.run_scenario("acoustic-naked")
    assert out.checks["gate_margin"] > 0
    assert out.checks["terminal_slope"] == pytest.approx(-1.0, abs=0.05)
    assert out.checks["phi_divergence_exponent"] == pytest.approx(-2.0, abs=0.1)
    assert out.branch(Branch.MINUS, Direction.FORWARD).classification is Classification.TERMINATES_AT_CENTER
    assert out.checks["h_residual_max"] < 1e-8
    for direction in (Direction.FORWARD, Direction.BACKWARD):
        assert out.branch(Branch.MINUS, direction).classification is not Classification.UNRESOLVED


@pytest.mark.slow
def test_white_hole_mirrors_black_hole():
    out = run_white_hole()
    assert out.checks["double_reversal_identity"] is True
    assert out.checks["reversal_discrepancy_plus"] < 1e-3
    assert out.checks["reversal_discrepancy_minus"] < 1e-3
    assert "black_plus_backward" in out.paths


# ---------- Kerr ----------

@pytest.mark.slow
def test_kerr_equatorial_scenario():
    """
    Objetivo: m=1, a=0.8, ρ₀=2: Δ₁=1, λ⁺=1, certificado de retorno y terminación en el anillo
    después de cruzar ambos horizontes.
    """
    out = run_kerr_equatorial()
    c = out.checks
    K = 2.0 / math.sqrt(3.36)
    assert c["band"] == pytest.approx([1.788854, 2.154066], abs=1e-6)
    assert c["delta1_at_0"] == pytest.approx(1.0, rel=1e-12)
    assert c["lambda_plus_at_0"] == pytest.approx(1.0, rel=1e-12)
    assert c["lambda_minus_at_0"] == pytest.approx((K - 1) / (K + 1), rel=1e-10)
    assert c["delta2_plus_identity_max"] < 1e-8
    assert c["equatorial_trap_max"] < 1e-12
    assert c["ring_after_horizons"] is True
    assert out.certificate is not None and out.certificate.holds
    assert c["minus_backward_turning_rho"] is not None
    for branch in (Branch.PLUS, Branch.MINUS):
        assert out.branch(branch, Direction.FORWARD).classification is Classification.TERMINATES_ON_RING

    # ρ−a ~ (x₀*−x₀)^p con p=2 (Plus) y p=4/3 (Minus)
    plus = out.branch(Branch.PLUS, Direction.FORWARD).fit(FitLaw.FINITE_TIME_POWER)
    minus = out.branch(Branch.MINUS, Direction.FORWARD).fit(FitLaw.FINITE_TIME_POWER)
    assert plus.parameters["exponent"] == pytest.approx(2.0, abs=0.1)
    assert minus.parameters["exponent"] == pytest.approx(4.0 / 3.0, abs=0.1)

    back = out.branch(Branch.MINUS, Direction.BACKWARD)
    decay = back.fit(FitLaw.EXP_DECAY)
    assert decay is not None and decay.r_squared > 0.999
    assert back.winding > 3.0
    assert c["h_residual_max"] < 1e-8

@pytest.mark.slow
def test_kerr_offequatorial_audits_pass():
    """
    Objetivo: con z′ pequeño ambas ramas terminan en el anillo tras los horizontes, las cotas
    de Δ₂ y Δ₃ se cumplen sobre la capa de masa y Δ₁⁻ escala como δ⁻¹.
    """
    out = run_kerr_offequatorial()
    c = out.checks
    assert out.audits
    assert all(rec.passed for rec in out.audits)
    assert any(rec.checked_samples > 0 for rec in out.audits)
    for branch in (Branch.PLUS, Branch.MINUS):
        assert out.branch(branch, Direction.FORWARD).classification is Classification.TERMINATES_ON_RING
    assert c["ring_after_horizons"] is True
    assert c["funnel_plus"]["z_min"] > 0
    assert c["delta1_minus_exponent"] == pytest.approx(-1.0, abs=0.15)
    assert c["h_residual_max"] < 1e-8

@pytest.mark.slow
def test_kerr_extremal_and_naked():
    """
    Objetivo: a=m da el producto (ρ−ρ̂₊)|x₀| acotado; a>m da exponente 4/3 y más vueltas al bajar a.
    """
    out = run_kerr_extremal_and_naked()
    band_ratio = out.checks["extremal"]["band_ratio"]
    assert band_ratio is not None and band_ratio < 3.0
    naked = out.checks["naked"]
    assert [n["a"] for n in naked] == [1.2, 1.1, 1.05, 1.02]
    for n in naked:
        assert n["exponent"] == pytest.approx(4.0 / 3.0, abs=0.1)
    assert out.checks["winding_monotone"] is True


# ---------- auditorías ----------

def test_audit_skips_non_kerr(synthetic_path):
    assert audit_path(synthetic_path) == []


def test_audit_only_counts_on_shell_samples(kerr_initial, mocker):
    """
    Objetivo: las cotas se auditan solo sobre muestras con |H|/(1+escala) bajo la tolerancia.
    """
    path = trace(kerr_initial, Branch.PLUS, Direction.FORWARD, StopSpec(x0_max=0.2))
    on_shell = audit_path(path)
    assert all(rec.checked_samples > 0 and rec.passed for rec in on_shell)

    mocker.patch("physics.audits.shell_residuals", return_value=np.ones(len(path.samples)))
    off_shell = audit_path(path)
    assert [rec.checked_samples for rec in off_shell] == [0, 0]
