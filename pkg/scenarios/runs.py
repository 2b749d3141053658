# scenarios/runs.py
"""
Piezas comunes de los escenarios:
- run_branch      : integra una rama/dirección y registra el resultado
- path_table      : DataFrame de la trayectoria + cocientes dρ/dx₀, dφ/dx₀, dφ/dρ, dz/dx₀, r
- classify        : clasificación a partir del evento terminal (+ ajuste asintótico)
- branch_outcome  : BranchOutcome serializable
- run_explicit    : escena arbitraria (sin preset de escenario)
"""

from __future__ import annotations

import math

import numpy as np
import pandas as pd

from common.log import log, warn
from domain.metric_models import MetricKind, MetricModel, RegionKind
from domain.outcome_models import BranchOutcome, Classification, EventTime, FitResult, ScenarioOutcome
from domain.path_models import Branch, Direction, EventKind, GeodesicPath, InitialData, StopSpec
from domain.energy_models import BumpSpec
from physics.energy import superradiance_report
from physics.fitting import fit_exp_decay, fit_one_over_x0
from physics.hamiltonian import sym_gradient
from physics.integrator import shell_residuals, trace
from physics.metric import metric_jet

SPIRAL_EFOLDS = 24.0


def path_key(branch: Branch, direction: Direction, label: str = "") -> str:
    key = f"{branch.value}_{direction.value}"
    return f"{key}_{label}" if label else key


def run_branch(initial: InitialData, branch: Branch, direction: Direction,
               stops: StopSpec | None = None) -> GeodesicPath:
    path = trace(initial, branch, direction, stops)
    if path.failed:
        warn(f"{branch.value}/{direction.value}: la integración terminó con NumericalFailure")
    return path


def backward_stops(stops: StopSpec | None) -> StopSpec:
    """Parada por espiral activa en las corridas hacia atrás."""
    base = stops or StopSpec()
    if base.spiral_efolds is not None:
        return base
    return base.model_copy(update={"spiral_efolds": SPIRAL_EFOLDS})


def horizon_stops(stops: StopSpec | None) -> StopSpec:
    return (stops or StopSpec()).model_copy(update={"stop_on_horizon": True})


def path_table(path: GeodesicPath) -> pd.DataFrame:
    df = path.to_frame()
    rho = df["rho"].to_numpy()
    z = df["z"].to_numpy()
    with np.errstate(all="ignore"):
        jet = metric_jet(path.model, rho, z)
        g = sym_gradient(jet, rho, df["xi0"].to_numpy(), df["xi_rho"].to_numpy(),
                         df["xi_phi"].to_numpy(), df["xi_z"].to_numpy())
        df["r"] = np.broadcast_to(jet.r, rho.shape)
        df["drho_dx0"] = g.d_xi_rho / g.d_xi0
        df["dphi_dx0"] = g.d_xi_phi / g.d_xi0
        df["dz_dx0"] = g.d_xi_z / g.d_xi0
        df["dphi_drho"] = g.d_xi_phi / g.d_xi_rho
    return df


def after_event(df: pd.DataFrame, path: GeodesicPath, kind: EventKind) -> pd.DataFrame:
    """Muestras posteriores (en la dirección de integración) al primer evento `kind`."""
    hits = path.events_of(kind)
    if not hits:
        return df.iloc[0:0]
    x0 = hits[0].x0
    sel = df["x0"] >= x0 if path.direction is Direction.FORWARD else df["x0"] <= x0
    return df[sel]


def terminal_segment(df: pd.DataFrame, mask) -> pd.DataFrame:
    """Último tramo contiguo de muestras donde `mask` es verdadero."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any() or not mask[-1]:
        return df.iloc[0:0]
    false_idx = np.flatnonzero(~mask)
    start = false_idx[-1] + 1 if false_idx.size else 0
    return df.iloc[start:]


def horizon_gap(model: MetricModel, df: pd.DataFrame) -> np.ndarray:
    """Distancia ecuatorial al horizonte exterior: ρ − ρ̂₊ (ρ − |A| en acústica)."""
    return df["rho"].to_numpy() - model.horizon_rho


def winding(df_after_turn: pd.DataFrame) -> float | None:
    if df_after_turn.empty:
        return None
    phi = df_after_turn["phi_unwrapped"].to_numpy()
    return abs(phi[-1] - phi[0]) / (2 * math.pi)


def classify(path: GeodesicPath, asymptotic_fit: FitResult | None = None) -> Classification:
    if path.failed or not path.events:
        return Classification.UNRESOLVED
    kinds = [e.kind for e in path.events]
    last = kinds[-1]
    if last is EventKind.ESCAPE:
        if EventKind.TURNING_POINT in kinds:
            return Classification.TURNS_THEN_ESCAPES
        return Classification.ESCAPES_TO_INFINITY
    if last is EventKind.RING_TERMINATION:
        return Classification.TERMINATES_ON_RING
    if last is EventKind.CENTER_TERMINATION:
        return Classification.TERMINATES_AT_CENTER
    if last in (EventKind.SPIRAL_TRUNCATION, EventKind.MAX_TIME) and asymptotic_fit is not None:
        return (Classification.ASYMPTOTIC_HORIZON_APPROACH if asymptotic_fit.accepted
                else Classification.UNRESOLVED)
    crossings = [k for k in kinds if k in (EventKind.OUTER_HORIZON_CROSS, EventKind.INNER_HORIZON_CROSS)]
    if crossings:
        if crossings[-1] is EventKind.INNER_HORIZON_CROSS:
            return Classification.CROSSES_INNER_HORIZON
        return Classification.CROSSES_OUTER_HORIZON
    return Classification.UNRESOLVED


def branch_outcome(path: GeodesicPath, classification: Classification,
                   fits: list[FitResult] | None = None, label: str = "",
                   df: pd.DataFrame | None = None) -> BranchOutcome:
    turn = None
    if path.events_of(EventKind.TURNING_POINT):
        frame = df if df is not None else path.to_frame()
        turn = winding(after_event(frame, path, EventKind.TURNING_POINT))
    out = BranchOutcome(
        branch=path.branch, direction=path.direction, classification=classification,
        events=[EventTime(kind=e.kind, x0=e.x0) for e in path.events],
        fits=fits or [],
        winding=turn,
        terminal_x0=path.samples[-1].x0,
        label=label,
    )
    log("scenario", f"{path.branch.value}/{path.direction.value}{' ' + label if label else ''}: "
                    f"{classification.value} (x0={out.terminal_x0:.6g})")
    return out


def asymptotic_fit(path: GeodesicPath, df: pd.DataFrame) -> FitResult | None:
    """ExpDecay (o OneOverX0 en el caso extremo) de la distancia al horizonte tras el retorno."""
    model = path.model
    if model.horizon_rho is None or path.terminal_event is None:
        return None
    if path.terminal_event.kind not in (EventKind.SPIRAL_TRUNCATION, EventKind.MAX_TIME):
        return None
    tail = after_event(df, path, EventKind.TURNING_POINT)
    if tail.empty:
        tail = df
    gap = horizon_gap(model, tail)
    extremal = model.kind is MetricKind.KERR and model.a == model.m
    if extremal:
        return fit_one_over_x0(tail["x0"].to_numpy(), gap)
    return fit_exp_decay(tail["x0"].to_numpy(), gap)


def conservation(paths: list[GeodesicPath]) -> dict[str, float]:
    """
    Máximo de |H|/(1 + escala) por muestra y deriva relativa de ξ₀, ξ_φ sobre las trayectorias.
    Con K = 0 la escala es |ξ|², de modo que el residuo queda en unidades de 1+|ξ|².
    """
    h_max, drift0, drift_phi = 0.0, 0.0, 0.0
    for path in paths:
        df = path.to_frame()
        xi = path.samples[0].xi
        norm = 1.0 + math.sqrt(xi.xi0 ** 2 + xi.xi_rho ** 2 + xi.xi_phi ** 2 + xi.xi_z ** 2)
        h_max = max(h_max, float(np.max(shell_residuals(path))))
        drift0 = max(drift0, float(np.max(np.abs(df["xi0"].to_numpy() - xi.xi0))) / norm)
        drift_phi = max(drift_phi, float(np.max(np.abs(df["xi_phi"].to_numpy() - xi.xi_phi))) / norm)
    return {"h_residual_max": h_max, "xi0_drift": drift0, "xi_phi_drift": drift_phi}


def in_region(df: pd.DataFrame, region: RegionKind) -> np.ndarray:
    return (df["region"] == region.value).to_numpy()


def run_explicit(initial: InitialData, branches: list[Branch], directions: list[Direction],
                 stops: StopSpec | None = None, bump: BumpSpec | None = None,
                 scenario_id: str = "explicit") -> ScenarioOutcome:
    """Corre las combinaciones pedidas sobre una escena arbitraria."""
    model = initial.model
    outcome = ScenarioOutcome(
        scenario_id=scenario_id,
        parameters={"A": model.A, "B": model.B, "m": model.m, "a": model.a,
                    "rho0": initial.y0.rho, "z0": initial.y0.z},
    )
    for direction in directions:
        run_stops = backward_stops(stops) if direction is Direction.BACKWARD else stops
        for branch in branches:
            path = run_branch(initial, branch, direction, run_stops)
            df = path.to_frame()
            fit = asymptotic_fit(path, df)
            outcome.branches.append(
                branch_outcome(path, classify(path, fit), [fit] if fit else [], df=df)
            )
            outcome.paths[path_key(branch, direction)] = path
    if bump is not None:
        outcome.energy = superradiance_report(model, bump, initial.eta)
    outcome.checks.update(conservation(list(outcome.paths.values())))
    return outcome
