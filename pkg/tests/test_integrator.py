"""
Tests para physics.integrator: estado inicial, integración con eventos, cociente dρ/dx₀ e inversión temporal.
Finalidad: Verificar que las trayectorias respetan la capa de masa y terminan con el evento correcto.
"""

import numpy as np
import pytest

from common.errors import DomainError, HorizonQuotient
from domain.metric_models import MetricModel, SpatialPoint
from domain.path_models import Branch, Direction, EventKind, StopSpec
from physics.integrator import drho_dx0, init_state, integrate, shell_residuals, time_reverse, trace
from scenarios.presets import build_initial

SHORT = StopSpec(escape_factor=4.0, x0_max=200.0)


def test_init_state_acoustic_minus(acoustic_model):
    st = init_state(acoustic_model, SpatialPoint(rho=2.5), (-0.8, -1.5, 0.0), Branch.MINUS)
    assert st.xi.xi0 == pytest.approx(1.08)
    assert (st.s, st.x0) == (0.0, 0.0)


def test_init_state_kerr_plus_is_one(kerr_initial):
    st = init_state(kerr_initial.model, kerr_initial.y0, kerr_initial.eta, Branch.PLUS)
    assert st.xi.xi0 == pytest.approx(1.0, rel=1e-12)


def test_init_state_flat():
    model = MetricModel.flat()
    plus = init_state(model, SpatialPoint(rho=1.0), (1.0, 0.0, 0.0), Branch.PLUS)
    minus = init_state(model, SpatialPoint(rho=1.0), (1.0, 0.0, 0.0), Branch.MINUS)
    assert (plus.xi.xi0, minus.xi.xi0) == pytest.approx((1.0, -1.0))


def test_init_state_rejects_zero_eta(acoustic_model):
    with pytest.raises(DomainError):
        init_state(acoustic_model, SpatialPoint(rho=2.5), (0.0, 0.0, 0.0), Branch.PLUS)


@pytest.mark.parametrize("branch,expected", [(Branch.PLUS, 0.4), (Branch.MINUS, -1.2)])
def test_initial_radial_speed(acoustic_model, branch, expected):
    """
    Objetivo: dρ/dx₀ en x₀=0 vale +|A|/ρ₀ (Plus) y −3|A|/ρ₀ (Minus).
    """
    st = init_state(acoustic_model, SpatialPoint(rho=2.5), (-0.8, -1.5, 0.0), branch)
    assert drho_dx0(st, acoustic_model) == pytest.approx(expected, rel=1e-12)


def test_drho_dx0_signals_degenerate_quotient(acoustic_model, mocker):
    st = init_state(acoustic_model, SpatialPoint(rho=2.5), (-0.8, -1.5, 0.0), Branch.PLUS)
    mocker.patch("physics.integrator.grad_H", return_value=(0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0))
    with pytest.raises(HorizonQuotient):
        drho_dx0(st, acoustic_model)


def test_plus_escapes_monotonically(superradiant_initial):
    """
    Objetivo: la rama Plus hacia adelante se aleja con ρ(x₀) creciente y termina en Escape.
    """
    path = trace(superradiant_initial, Branch.PLUS, Direction.FORWARD, SHORT)
    df = path.to_frame()
    assert path.terminal_event.kind is EventKind.ESCAPE
    assert np.all(np.diff(df["rho"].to_numpy()) > 0)
    assert np.all(np.diff(df["x0"].to_numpy()) > 0)
    assert df["rho"].iloc[-1] == pytest.approx(4.0 * 2.5, rel=1e-6)


def test_minus_crosses_horizon_at_finite_time(superradiant_initial):
    stops = StopSpec(stop_on_horizon=True)
    path = trace(superradiant_initial, Branch.MINUS, Direction.FORWARD, stops)
    crossing = path.events_of(EventKind.OUTER_HORIZON_CROSS)
    assert crossing
    assert 0 < crossing[0].x0 < stops.x0_max
    assert crossing[0].location.rho == pytest.approx(1.0, rel=1e-8)


def test_conserved_quantities_and_shell(superradiant_initial):
    """
    Objetivo: ξ₀ y ξ_φ se conservan y el residuo de H queda bajo la tolerancia.
    """
    path = trace(superradiant_initial, Branch.MINUS, Direction.FORWARD, StopSpec(stop_on_horizon=True))
    df = path.to_frame()
    assert np.max(np.abs(df["xi0"] - 1.08)) < 1e-12
    assert np.max(np.abs(df["xi_phi"] + 1.5)) < 1e-12
    assert np.max(shell_residuals(path)) < 1e-8
    assert not path.failed


def test_samples_carry_diagnostics(superradiant_initial):
    path = trace(superradiant_initial, Branch.PLUS, Direction.FORWARD, SHORT)
    assert len(path.diagnostics) == len(path.samples)
    assert set(path.to_frame()["region"]) <= {"ergoregion", "exterior"}


def test_backward_plus_runs_with_negative_time(superradiant_initial):
    path = trace(superradiant_initial, Branch.PLUS, Direction.BACKWARD, SHORT)
    x0 = path.to_frame()["x0"].to_numpy()
    assert np.all(np.diff(x0) < 0)
    assert x0[-1] < 0


def test_integrate_reports_max_time(superradiant_initial):
    st = init_state(superradiant_initial.model, superradiant_initial.y0, superradiant_initial.eta, Branch.PLUS)
    path = integrate(st, superradiant_initial.model, Direction.FORWARD, StopSpec(x0_max=0.5))
    assert path.terminal_event.kind is EventKind.MAX_TIME
    assert path.samples[-1].x0 == pytest.approx(0.5, rel=1e-6)


def test_time_reverse(superradiant_initial):
    """
    Objetivo: (A, B) -> (−A, −B), η -> −η y la doble inversión es la identidad.
    """
    white = time_reverse(superradiant_initial)
    assert (white.model.A, white.model.B) == (1.0, -10.0)
    assert white.eta == (0.8, 1.5, -0.0)
    assert time_reverse(white) == superradiant_initial


def test_time_reverse_kerr_rejected(kerr_initial):
    with pytest.raises(DomainError):
        time_reverse(kerr_initial)


def test_shell_residual_is_relative_to_symbol_scale(superradiant_initial, mocker):
    """
    Objetivo: el residuo se mide en unidades de 1 + escala del símbolo, no en valor absoluto.
    """
    path = trace(superradiant_initial, Branch.PLUS, Direction.FORWARD, StopSpec(x0_max=0.5))
    mocker.patch("physics.integrator.sym_h", return_value=3.0)
    mocker.patch("physics.integrator.sym_h_scale", return_value=5.0)
    assert shell_residuals(path) == pytest.approx(np.full(len(path.samples), 0.5))


def test_affine_budget_stops_with_max_time(superradiant_initial):
    """
    Objetivo: el presupuesto s_max corta la integración aunque x₀ no haya llegado a x0_max.
    """
    path = trace(superradiant_initial, Branch.PLUS, Direction.FORWARD, StopSpec(s_max=1.0e-3))
    s = np.array([st.s for st in path.samples])
    assert path.terminal_event.kind is EventKind.MAX_TIME
    assert abs(path.terminal_event.s) == pytest.approx(1.0e-3, rel=1e-6)
    assert np.all(np.diff(s) > 0)
    assert 0 < path.samples[-1].x0 < 200.0


def test_minus_reaches_center_without_horizon():
    """
    Objetivo: con A=0 la rama Minus baja hasta ρ = center_tol·ρ₀ sin disparar el control de H.
    """
    initial = build_initial("remark-4.2", MetricModel.acoustic(0.0, 4.0), 2.0, eta_rho=-0.1)
    stops = StopSpec()
    path = trace(initial, Branch.MINUS, Direction.FORWARD, stops)
    assert path.terminal_event.kind is EventKind.CENTER_TERMINATION
    assert not path.failed
    assert path.terminal_event.location.rho == pytest.approx(stops.center_tol * 2.0, rel=1e-6)
    assert np.max(shell_residuals(path)) < 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("model,rho_range", [
    (MetricModel.acoustic(-1.0, 10.0), (2.5, 8.0)),
    (MetricModel.kerr(1.0, 0.8), (1.9, 4.0)),
])
def test_conservation_over_random_trajectories(model, rho_range):
    """
    Objetivo: 50 trayectorias aleatorias por familia: ξ₀ y ξ_φ se conservan, |H|/(1+escala) < 1e-8
    y, en el plano ecuatorial de Kerr, z y ξ_z quedan en cero.
    """
    rng = np.random.default_rng(2024)
    stops = StopSpec(escape_factor=3.0, x0_max=50.0)
    for _ in range(50):
        rho0 = float(rng.uniform(*rho_range))
        eta = (float(rng.uniform(-1.0, 1.0)), float(rng.uniform(-2.0, 2.0)), 0.0)
        branch = Branch.PLUS if rng.random() < 0.5 else Branch.MINUS
        direction = Direction.FORWARD if rng.random() < 0.5 else Direction.BACKWARD
        st = init_state(model, SpatialPoint(rho=rho0), eta, branch)
        path = integrate(st, model, direction, stops)
        df = path.to_frame()
        assert not path.failed
        assert np.max(np.abs(df["xi0"] - st.xi.xi0)) <= 1e-12 * (1.0 + abs(st.xi.xi0))
        assert np.max(np.abs(df["xi_phi"] - st.xi.xi_phi)) <= 1e-12 * (1.0 + abs(st.xi.xi_phi))
        assert np.max(shell_residuals(path)) < 1e-8
        assert np.all(df["z"] == 0.0) and np.all(df["xi_z"] == 0.0)
