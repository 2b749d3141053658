# scenarios/acoustic.py
"""
Escenarios del flujo acústico (vórtice con sumidero/fuente):
- run_acoustic_superradiant : A<0, B sobre el umbral; Plus escapa, Minus cruza ρ=|A|;
                              hacia atrás ambos retornan (Minus espiraliza)
- run_acoustic_naked        : A=0; Minus alcanza ρ=0 en tiempo finito
- run_acoustic_shortlived   : 0<B<|A|; ambas ramas cruzan el horizonte
- run_white_hole            : (A,B) -> (−A,−B); hacia adelante reproduce el pasado del agujero negro
"""

from __future__ import annotations

import numpy as np

from common.errors import DomainError, GateFailed
from common.log import log
from domain.energy_models import BumpSpec
from domain.metric_models import MetricModel
from domain.outcome_models import ScenarioOutcome
from domain.path_models import Branch, Direction, EventKind, GeodesicPath, StopSpec
from physics.energy import superradiance_report
from physics.fitting import fit_phi_log_divergence
from physics.hamiltonian import branch_root
from physics.integrator import drho_dx0, init_state, time_reverse
from physics.turning import turning_report
from scenarios.presets import (
    build_initial, gate_acoustic_naked, gate_acoustic_shortlived, gate_acoustic_superradiant,
)
from scenarios.runs import (
    asymptotic_fit, backward_stops, branch_outcome, classify, conservation,
    horizon_stops, path_key, path_table, run_branch,
)

REVERSAL_WINDOW = 10.0   # |x₀| máximo en la comparación agujero blanco / negro


def _run_pair(outcome: ScenarioOutcome, initial, direction: Direction, stops: StopSpec) -> dict:
    """Corre Plus y Minus en una dirección; añade resultados al outcome."""
    out = {}
    for branch in (Branch.PLUS, Branch.MINUS):
        path = run_branch(initial, branch, direction, stops)
        df = path_table(path)
        fit = asymptotic_fit(path, df)
        outcome.branches.append(branch_outcome(path, classify(path, fit), [fit] if fit else [], df=df))
        outcome.paths[path_key(branch, direction)] = path
        out[branch] = (path, df)
    return out


def _initial_slopes(initial) -> dict[str, float]:
    return {
        f"drho_dx0_{b.value}_at_0": drho_dx0(init_state(initial.model, initial.y0, initial.eta, b), initial.model)
        for b in (Branch.PLUS, Branch.MINUS)
    }


def run_acoustic_superradiant(A: float = -1.0, B: float = 10.0, rho0: float = 2.5,
                              stops: StopSpec | None = None,
                              bump: BumpSpec | None = None) -> ScenarioOutcome:
    threshold = gate_acoustic_superradiant(A, B, rho0)
    model = MetricModel.acoustic(A, B)
    initial = build_initial("eq-4.9", model, rho0)
    log("scenario", f"acoustic-superradiant A={A} B={B} ρ₀={rho0} η={initial.eta}")

    outcome = ScenarioOutcome(scenario_id="acoustic-superradiant",
                              parameters={"A": A, "B": B, "rho0": rho0})
    fwd = _run_pair(outcome, initial, Direction.FORWARD, horizon_stops(stops))
    bwd = _run_pair(outcome, initial, Direction.BACKWARD, backward_stops(stops))

    for branch in (Branch.PLUS, Branch.MINUS):
        outcome.turning.append(turning_report(model, rho0, initial.eta, branch, [bwd[branch][0]]))

    plus_rho = fwd[Branch.PLUS][1]["rho"].to_numpy()
    minus_cross = fwd[Branch.MINUS][0].events_of(EventKind.OUTER_HORIZON_CROSS)
    outcome.checks.update({
        "threshold": threshold,
        "xi0_minus": branch_root(model, initial.y0, initial.eta, Branch.MINUS),
        "plus_forward_monotone": bool(np.all(np.diff(plus_rho) > 0)),
        "minus_horizon_x0": minus_cross[0].x0 if minus_cross else None,
        **_initial_slopes(initial),
        **conservation(list(outcome.paths.values())),
    })
    if bump is not None:
        outcome.energy = superradiance_report(model, bump, initial.eta)
    outcome.notes.append("backward Minus truncated by the spiral rule; the approach is asymptotic")
    return outcome


def run_acoustic_naked(B: float = 4.0, rho0: float = 2.0, eta_rho: float = -0.1,
                       stops: StopSpec | None = None,
                       bump: BumpSpec | None = None) -> ScenarioOutcome:
    margin = gate_acoustic_naked(B, rho0, eta_rho)
    model = MetricModel.acoustic(0.0, B)
    initial = build_initial("remark-4.2", model, rho0, eta_rho=eta_rho)
    log("scenario", f"acoustic-naked B={B} ρ₀={rho0} η={initial.eta}")

    outcome = ScenarioOutcome(scenario_id="acoustic-naked",
                              parameters={"A": 0.0, "B": B, "rho0": rho0, "eta_rho": eta_rho})
    fwd = _run_pair(outcome, initial, Direction.FORWARD, stops or StopSpec())
    bwd = _run_pair(outcome, initial, Direction.BACKWARD, stops or StopSpec())

    path, df = fwd[Branch.MINUS]
    fit = fit_phi_log_divergence(df["rho"].to_numpy(), df["dphi_drho"].to_numpy())
    minus_fwd = outcome.branch(Branch.MINUS, Direction.FORWARD)
    minus_fwd.fits.append(fit)

    # última década de ρ antes de la parada en el centro
    rho = df["rho"].to_numpy()
    last_decade = rho <= 10.0 * rho.min()
    slope = float(np.median(df["drho_dx0"].to_numpy()[last_decade]))

    for branch in (Branch.PLUS, Branch.MINUS):
        outcome.turning.append(turning_report(model, rho0, initial.eta, branch, [bwd[branch][0]]))
    outcome.checks.update({
        "gate_margin": margin,
        "terminal_slope": slope,
        "phi_divergence_exponent": fit.parameters.get("exponent"),
        "phi_total_minus_forward": float(df["phi_unwrapped"].iloc[-1] - df["phi_unwrapped"].iloc[0]),
        **_initial_slopes(initial),
        **conservation(list(outcome.paths.values())),
    })
    if bump is not None:
        outcome.energy = superradiance_report(model, bump, initial.eta)
    return outcome


def run_acoustic_shortlived(A: float = -2.0, B: float = 1.0, rho0: float = 2.1,
                            stops: StopSpec | None = None,
                            bump: BumpSpec | None = None) -> ScenarioOutcome:
    gate_acoustic_shortlived(A, B, rho0)
    model = MetricModel.acoustic(A, B)
    initial = build_initial("eq-5.2", model, rho0)
    xi0_minus = branch_root(model, initial.y0, initial.eta, Branch.MINUS)
    if xi0_minus <= 0:
        raise GateFailed(f"λ⁻ = {xi0_minus:.6g} <= 0 con los datos eq-5.2")
    log("scenario", f"acoustic-shortlived A={A} B={B} ρ₀={rho0} λ⁻={xi0_minus:.6g}")

    outcome = ScenarioOutcome(scenario_id="acoustic-shortlived",
                              parameters={"A": A, "B": B, "rho0": rho0})
    _run_pair(outcome, initial, Direction.FORWARD, horizon_stops(stops))
    bwd = _run_pair(outcome, initial, Direction.BACKWARD, backward_stops(stops))

    for branch in (Branch.PLUS, Branch.MINUS):
        outcome.turning.append(turning_report(model, rho0, initial.eta, branch, [bwd[branch][0]]))
    outcome.checks.update({
        "xi0_minus": xi0_minus,
        **_initial_slopes(initial),
        **conservation(list(outcome.paths.values())),
    })
    if bump is not None:
        outcome.energy = superradiance_report(model, bump, initial.eta)
    outcome.notes.append("the x₀ -> −∞ tail is checked only within the integration window")
    return outcome


def reversal_discrepancy(white: GeodesicPath, black: GeodesicPath,
                         window: float = REVERSAL_WINDOW) -> float:
    """
    Máxima discrepancia entre la corrida hacia adelante del agujero blanco y la
    corrida hacia atrás del agujero negro, comparando en |x₀| ≤ window:
    ρ, φ iguales; x₀, ξ_ρ, ξ_φ con signo opuesto.
    """
    w, b = white.to_frame(), black.to_frame()
    tw, tb = w["x0"].to_numpy(), -b["x0"].to_numpy()
    hi = min(window, tw[-1], tb[-1])
    grid = np.linspace(0.0, hi, 400)
    worst = 0.0
    for col, sign in (("rho", 1.0), ("phi_unwrapped", 1.0), ("xi_rho", -1.0), ("xi_phi", -1.0)):
        ya = np.interp(grid, tw, w[col].to_numpy())
        yb = np.interp(grid, tb, sign * b[col].to_numpy())
        worst = max(worst, float(np.max(np.abs(ya - yb))))
    return worst


def run_white_hole(A: float = 1.0, B: float = -10.0, rho0: float = 2.5,
                   stops: StopSpec | None = None,
                   bump: BumpSpec | None = None) -> ScenarioOutcome:
    if A <= 0:
        raise DomainError(f"el agujero blanco acústico requiere A > 0 (A={A})")
    black_model = MetricModel.acoustic(-A, -B)
    gate_acoustic_superradiant(-A, -B, rho0)
    black = build_initial("eq-4.9", black_model, rho0)
    white = time_reverse(black)
    log("scenario", f"white-hole A={A} B={B} ρ₀={rho0}: comparado con A={-A} B={-B}")

    outcome = ScenarioOutcome(scenario_id="white-hole", parameters={"A": A, "B": B, "rho0": rho0})
    run_stops = backward_stops(stops)
    fwd = _run_pair(outcome, white, Direction.FORWARD, run_stops)

    discrepancy = {}
    for branch in (Branch.PLUS, Branch.MINUS):
        black_path = run_branch(black, branch, Direction.BACKWARD, run_stops)
        outcome.paths[f"black_{path_key(branch, Direction.BACKWARD)}"] = black_path
        discrepancy[f"reversal_discrepancy_{branch.value}"] = reversal_discrepancy(fwd[branch][0], black_path)

    outcome.checks.update({
        **discrepancy,
        "double_reversal_identity": time_reverse(white) == black,
        **conservation([p for k, p in outcome.paths.items() if not k.startswith("black_")]),
    })
    if bump is not None:
        outcome.energy = superradiance_report(white.model, bump, white.eta)
    return outcome
