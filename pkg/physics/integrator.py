# physics/integrator.py
"""
Integración de las bicaracterísticas nulas, parametrizadas por τ = |x₀|.
- init_state(model, y0, η, rama) : ξ₀ = λ^rama(y0, η), residuo H verificado.
- integrate(state, model, dir, stops): sistema en τ con solve_ivp (RK45,
  salida densa, eventos localizados); devuelve GeodesicPath con diagnósticos.
- drho_dx0(state, model)          : cociente ∂H/∂ξ_ρ / ∂H/∂ξ₀ (solo diagnóstico).
- time_reverse(initial)           : contraparte "agujero blanco" de una escena acústica.

Estado: y = [x₀, ρ, φ, z, ξ₀, ξ_ρ, ξ_φ, ξ_z];  dX/ds = ∂H/∂ξ,  dξ/ds = −∂H/∂X.
El signo de ds se elige para que x₀ avance en la dirección pedida. Como ∂H/∂ξ₀ no se anula,
se integra en τ (dy/dτ = (dy/ds)/|∂H/∂ξ₀|) con s como noveno componente; así ρ baja
linealmente hacia el centro acústico y el presupuesto s_max pasa a ser un evento.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from common.errors import DomainError, HorizonQuotient, NumericalFailure
from common.log import log
from domain.metric_models import MetricKind, MetricModel, SpatialPoint
from domain.path_models import (
    Branch, Covector, Direction, Event, EventKind, GeodesicPath, InitialData,
    PhaseState, SampleDiagnostics, StopSpec,
)
from domain.metric_models import RegionKind
from physics.hamiltonian import (
    grad_H, lambda_roots, sym_delta1, sym_delta2, sym_gradient, sym_h, sym_h_scale,
)
from physics.metric import check_point, classify_arrays, metric_jet

INIT_RESIDUAL = 1.0e-12
QUOTIENT_FLOOR = 1.0e-12


def init_state(model: MetricModel, y0: SpatialPoint, eta, branch: Branch) -> PhaseState:
    eta_rho, eta_phi, *rest = eta
    eta_z = rest[0] if rest else 0.0
    if eta_rho == 0 and eta_phi == 0 and eta_z == 0:
        raise DomainError("η no puede ser nulo")
    check_point(model, y0)
    lo, hi = lambda_roots(model, y0, (eta_rho, eta_phi, eta_z))
    xi0 = hi if branch is Branch.PLUS else lo

    jet = metric_jet(model, y0.rho, y0.z)
    h = float(sym_h(jet, y0.rho, xi0, eta_rho, eta_phi, eta_z))
    scale = float(sym_h_scale(jet, y0.rho, xi0, eta_rho, eta_phi, eta_z))
    if abs(h) > INIT_RESIDUAL * (1.0 + scale):
        raise NumericalFailure(f"residuo inicial de H demasiado grande: {h:.3e}")
    return PhaseState(
        s=0.0, x0=0.0, p=y0,
        xi=Covector(xi0=xi0, xi_rho=float(eta_rho), xi_phi=float(eta_phi), xi_z=float(eta_z)),
    )


def _state_vector(state: PhaseState) -> np.ndarray:
    p, xi = state.p, state.xi
    return np.array([state.x0, p.rho, p.phi, p.z, xi.xi0, xi.xi_rho, xi.xi_phi, xi.xi_z], dtype=float)


class _Evaluator:
    """Memoriza (jet, gradiente) del último estado evaluado; los eventos lo reutilizan."""

    def __init__(self, model: MetricModel):
        self.model = model
        self._key: bytes | None = None
        self._val = None

    def __call__(self, y: np.ndarray):
        key = y.tobytes()
        if key != self._key:
            with np.errstate(all="ignore"):
                jet = metric_jet(self.model, y[1], y[3])
                grad = sym_gradient(jet, y[1], y[4], y[5], y[6], y[7])
            self._key, self._val = key, (jet, grad)
        return self._val


def _event(fn: Callable, kind: EventKind, terminal: bool = False, direction: float = 0.0):
    fn.terminal = terminal
    fn.direction = direction
    fn.kind = kind
    return fn


def _build_events(model: MetricModel, rho0: float, direction: Direction, stops: StopSpec,
                  ev: _Evaluator) -> list[Callable]:
    events: list[Callable] = []

    def turning(t, y):
        return float(ev(y)[1].d_xi_rho)

    def escape(t, y):
        return y[1] - stops.escape_factor * rho0

    def affine_budget(t, y):
        return stops.s_max - abs(y[8])

    def health(t, y):
        jet, _ = ev(y)
        with np.errstate(all="ignore"):
            h = sym_h(jet, y[1], y[4], y[5], y[6], y[7])
            scale = sym_h_scale(jet, y[1], y[4], y[5], y[6], y[7])
        val = float(stops.h_tol * (1.0 + scale) - abs(h))
        return val if math.isfinite(val) else -1.0

    events += [
        _event(turning, EventKind.TURNING_POINT),
        _event(escape, EventKind.ESCAPE, terminal=True, direction=1.0),
        _event(affine_budget, EventKind.MAX_TIME, terminal=True, direction=-1.0),
        _event(health, EventKind.NUMERICAL_FAILURE, terminal=True, direction=-1.0),
    ]

    if model.kind is MetricKind.KERR:
        a = model.a

        def ergosphere(t, y):
            return float(ev(y)[0].K) - 1.0

        events.append(_event(ergosphere, EventKind.ERGOSPHERE_CROSS))
        if model.r_plus is not None:
            rp, rm = model.r_plus, model.r_minus

            def outer(t, y):
                return float(ev(y)[0].r) - rp

            events.append(_event(outer, EventKind.OUTER_HORIZON_CROSS,
                                 terminal=stops.stop_on_horizon))
            if rm < rp:
                def inner(t, y):
                    return float(ev(y)[0].r) - rm

                events.append(_event(inner, EventKind.INNER_HORIZON_CROSS))
        if a > 0:
            def ring(t, y):
                return (y[1] - a) ** 2 + y[3] ** 2 - stops.ring_tol * a * a

            events.append(_event(ring, EventKind.RING_TERMINATION, terminal=True, direction=-1.0))

    elif model.kind is MetricKind.ACOUSTIC:
        ergo = math.hypot(model.A, model.B)

        def ergosphere(t, y):
            return y[1] - ergo

        def center(t, y):
            return y[1] - stops.center_tol * rho0

        events.append(_event(ergosphere, EventKind.ERGOSPHERE_CROSS))
        events.append(_event(center, EventKind.CENTER_TERMINATION, terminal=True, direction=-1.0))
        if model.A != 0:
            horizon = abs(model.A)

            def outer(t, y):
                return y[1] - horizon

            events.append(_event(outer, EventKind.OUTER_HORIZON_CROSS,
                                 terminal=stops.stop_on_horizon))

    if stops.spiral_efolds is not None and model.has_horizons:
        events.append(_event(_spiral_event(model, direction, stops, ev),
                             EventKind.SPIRAL_TRUNCATION, terminal=True, direction=1.0))
    return events


def _spiral_event(model: MetricModel, direction: Direction, stops: StopSpec, ev: _Evaluator):
    """
    Truncado de la aproximación asintótica al horizonte: con la tasa local
    κ̂ = |dD/dx₀|/D (D = distancia al horizonte) se detiene cuando |x₀|·κ̂ alcanza
    spiral_efolds, o cuando D cae por debajo de spiral_floor·escala.
    """
    kerr = model.kind is MetricKind.KERR
    scale = model.r_plus if kerr else abs(model.A)

    def spiral(t, y):
        jet, g = ev(y)
        if kerr:
            dist = float(jet.r) - scale
            speed = float((jet.dr_drho * g.d_xi_rho + jet.dr_dz * g.d_xi_z) / g.d_xi0)
        else:
            dist = y[1] - scale
            speed = float(g.d_xi_rho / g.d_xi0)
        approaching = 0.0 < dist < 0.5 * scale and speed * direction.sign < 0.0
        if not approaching or not math.isfinite(speed):
            return -1.0
        kappa = abs(speed) / dist
        return max(abs(y[0]) * kappa - stops.spiral_efolds, math.log(stops.spiral_floor * scale / dist))

    return spiral


def _diagnostics(model: MetricModel, Y: np.ndarray) -> list[SampleDiagnostics]:
    rho, z = Y[1], Y[3]
    xi0, xr, xp, xz = Y[4], Y[5], Y[6], Y[7]
    with np.errstate(all="ignore"):
        jet = metric_jet(model, rho, z)
        h = sym_h(jet, rho, xi0, xr, xp, xz)
        d1 = sym_delta1(jet, rho, xr, xp, xz)
        d2 = sym_delta2(model, jet, rho, xi0, xp, xz)
    regions = classify_arrays(model, rho, jet.K, jet.r)
    return [
        SampleDiagnostics.model_construct(h_residual=hv, delta1=a, delta2=b, region=RegionKind(reg))
        for hv, a, b, reg in zip(np.broadcast_to(h, rho.shape).tolist(),
                                 np.broadcast_to(d1, rho.shape).tolist(),
                                 np.broadcast_to(d2, rho.shape).tolist(), regions.tolist())
    ]


def _atol(model: MetricModel, rho0: float, stops: StopSpec) -> np.ndarray:
    """Tolerancia absoluta por componente; ρ se afina para poder bajar hasta center_tol·ρ₀."""
    atol = np.full(9, stops.atol)
    if model.kind is MetricKind.ACOUSTIC:
        atol[1] = min(stops.atol, stops.rtol * stops.center_tol * rho0)
    return atol


def integrate(state: PhaseState, model: MetricModel, direction: Direction,
              stops: StopSpec | None = None) -> GeodesicPath:
    stops = stops or StopSpec()
    y0 = np.append(_state_vector(state), state.s)
    ev = _Evaluator(model)

    jet0, g0 = ev(y0)
    branch = Branch.PLUS if float(g0.d_xi0) > 0 else Branch.MINUS
    sgn = float(direction.sign * branch.sign)

    # parámetro τ = |x₀|: dy/dτ = (dy/ds)/|∂H/∂ξ₀|, y s va como noveno componente
    def rhs(t, y):
        _, g = ev(y)
        k = sgn / abs(float(g.d_xi0))
        return k * np.array([g.d_xi0, g.d_xi_rho, g.d_xi_phi, g.d_xi_z,
                             0.0, -g.d_rho, 0.0, -g.d_z, 1.0], dtype=float)

    events = _build_events(model, state.p.rho, direction, stops, ev)
    sol = solve_ivp(rhs, (0.0, stops.x0_max), y0, method="RK45", rtol=stops.rtol,
                    atol=_atol(model, state.p.rho, stops), events=events, dense_output=True)

    # muestras: pasos aceptados + puntos densos intermedios
    taus = np.asarray(sol.t, dtype=float)
    Y = np.asarray(sol.y, dtype=float)
    if stops.dense_substeps and len(taus) > 1 and sol.sol is not None:
        frac = np.arange(1, stops.dense_substeps + 1) / (stops.dense_substeps + 1)
        inner = (taus[:-1, None] + np.diff(taus)[:, None] * frac[None, :]).ravel()
        taus_all = np.concatenate([taus, inner])
        order = np.argsort(taus_all, kind="stable")
        taus_all = taus_all[order]
        Y = np.concatenate([Y, sol.sol(inner)], axis=1)[:, order]
        taus = taus_all

    found: list[tuple[float, Event]] = []
    for fn, t_events, y_events in zip(events, sol.t_events, sol.y_events):
        for t_e, y_e in zip(t_events, y_events):
            found.append((float(t_e), _make_event(fn.kind, y_e, ev)))
    found.sort(key=lambda item: item[0])
    out_events = [e for _, e in found]

    if sol.status == -1:
        out_events.append(_make_event(EventKind.NUMERICAL_FAILURE, Y[:, -1], ev))
    elif sol.status == 0:
        out_events.append(_make_event(EventKind.MAX_TIME, Y[:, -1], ev))

    samples = [
        PhaseState.model_construct(
            s=s, x0=x0,
            p=SpatialPoint.model_construct(rho=rho, phi=phi, z=z),
            xi=Covector.model_construct(xi0=a, xi_rho=b, xi_phi=c, xi_z=d),
        )
        for x0, rho, phi, z, a, b, c, d, s in zip(*Y.tolist())
    ]
    path = GeodesicPath(
        model=model, branch=branch, direction=direction,
        samples=samples, events=out_events, diagnostics=_diagnostics(model, Y),
    )
    last = path.terminal_event
    log("integrator", f"{branch.value}/{direction.value}: {len(samples)} muestras, "
                      f"fin {last.kind.value if last else '-'} en x0={samples[-1].x0:.6g}")
    return path


def _make_event(kind: EventKind, y: np.ndarray, ev: _Evaluator) -> Event:
    _, g = ev(np.asarray(y, dtype=float))
    with np.errstate(all="ignore"):
        speed = float(g.d_xi_rho / g.d_xi0)
    return Event(
        kind=kind, s=float(y[8]), x0=float(y[0]),
        location=SpatialPoint.model_construct(rho=float(y[1]), phi=float(y[2]), z=float(y[3])),
        data=speed if math.isfinite(speed) else 0.0,
    )


def trace(initial: InitialData, branch: Branch, direction: Direction,
          stops: StopSpec | None = None) -> GeodesicPath:
    """init_state + integrate para una escena."""
    state = init_state(initial.model, initial.y0, initial.eta, branch)
    return integrate(state, initial.model, direction, stops)


def drho_dx0(state: PhaseState, model: MetricModel) -> float:
    g = grad_H(model, state.p, state.xi)
    if abs(g[0]) < QUOTIENT_FLOOR:
        raise HorizonQuotient(f"|∂H/∂ξ₀| = {abs(g[0]):.3e} en ρ={state.p.rho}")
    return g[1] / g[0]


def time_reverse(initial: InitialData) -> InitialData:
    """(A, B) -> (−A, −B) y η -> −η: misma curva espacial recorrida con x₀ -> −x₀."""
    model = initial.model
    if model.kind is not MetricKind.ACOUSTIC:
        raise DomainError("time_reverse solo aplica a la métrica acústica")
    return initial.model_copy(update={
        "model": MetricModel.acoustic(-model.A, -model.B),
        "eta": tuple(-v for v in initial.eta),
    })


def shell_residuals(path: GeodesicPath) -> np.ndarray:
    """|H|/(1 + escala del símbolo) por muestra; la escala es 1+|ξ|² cuando K = 0."""
    df = path.to_frame()
    rho, z = df["rho"].to_numpy(), df["z"].to_numpy()
    cols = [df[c].to_numpy() for c in ("xi0", "xi_rho", "xi_phi", "xi_z")]
    with np.errstate(all="ignore"):
        jet = metric_jet(path.model, rho, z)
        h = sym_h(jet, rho, *cols)
        scale = sym_h_scale(jet, rho, *cols)
    return np.abs(np.broadcast_to(h, rho.shape)) / (1.0 + np.broadcast_to(scale, rho.shape))
