# scenarios/kerr.py
"""
Escenarios de Kerr en coordenadas de Kerr-Schild.
- run_kerr_equatorial          : a<m, ρ₀ en la ergorregión; adelante ambas ramas cruzan
                                 ambos horizontes y terminan en el anillo
- run_kerr_offequatorial       : z₀ > 0 pequeño; terminación en el anillo con auditorías
- run_kerr_extremal_and_naked  : a=m (aproximación O(1/x₀)) y a>m (vueltas cerca de r=m)
"""

from __future__ import annotations

import numpy as np

from common.errors import GateFailed
from common.log import log
from domain.energy_models import BumpSpec
from domain.metric_models import MetricModel, RegionKind
from domain.outcome_models import ScenarioOutcome
from domain.path_models import Branch, Direction, EventKind, GeodesicPath, StopSpec
from physics.audits import audit_path
from physics.energy import superradiance_report
from physics.fitting import fit_finite_time_power, fit_phi_limit, fit_power_law
from physics.hamiltonian import delta1, lambda_roots
from physics.turning import kerr_turning_certificate
from scenarios.presets import build_initial, gate_kerr_ergoregion
from scenarios.runs import (
    after_event, asymptotic_fit, backward_stops, branch_outcome, classify, conservation,
    in_region, path_key, path_table, run_branch, terminal_segment,
)

EXTREMAL_X0_MAX = 1.0e3
NAKED_A_GRID = (1.2, 1.1, 1.05, 1.02)
NAKED_CORE = 0.5     # tramo terminal a>m: r < NAKED_CORE·m
OFFEQ_Z0 = 1.0e-7    # retorno radial de Plus dentro del radio de parada del anillo


def _ring_fits(df, a: float, phi_power: float | None = None) -> list:
    gap = df["rho"].to_numpy() - a
    fits = [fit_finite_time_power(gap, df["drho_dx0"].to_numpy())]
    if phi_power is not None:
        fits.append(fit_phi_limit(gap, df["phi_unwrapped"].to_numpy(), phi_power))
    return fits


def _ring_order_ok(path: GeodesicPath) -> bool:
    """TerminatesOnRing con horizontes exige cruzarlos antes."""
    kinds = [e.kind for e in path.events]
    if not kinds or kinds[-1] is not EventKind.RING_TERMINATION or not path.model.has_horizons:
        return True
    need = [EventKind.OUTER_HORIZON_CROSS]
    if path.model.a < path.model.m:
        need.append(EventKind.INNER_HORIZON_CROSS)
    return all(k in kinds for k in need)


def _record(outcome: ScenarioOutcome, path: GeodesicPath, df, fits: list, label: str = "") -> None:
    asym = asymptotic_fit(path, df)
    if asym is not None:
        fits = [asym, *fits]
    outcome.branches.append(branch_outcome(path, classify(path, asym), fits, label=label, df=df))
    outcome.paths[path_key(path.branch, path.direction, label)] = path


def run_kerr_equatorial(m: float = 1.0, a: float = 0.8, rho0: float = 2.0,
                        stops: StopSpec | None = None,
                        bump: BumpSpec | None = None) -> ScenarioOutcome:
    if not a < m:
        raise GateFailed(f"el caso ecuatorial requiere a < m (a={a}, m={m})")
    model = MetricModel.kerr(m, a)
    gate_kerr_ergoregion(model, rho0)
    initial = build_initial("eq-7.5", model, rho0)
    log("scenario", f"kerr-equatorial m={m} a={a} ρ₀={rho0} η={initial.eta}")

    outcome = ScenarioOutcome(scenario_id="kerr-equatorial",
                              parameters={"m": m, "a": a, "rho0": rho0})
    runs: dict[tuple[Branch, Direction], tuple[GeodesicPath, object]] = {}
    for direction in (Direction.FORWARD, Direction.BACKWARD):
        run_stops = backward_stops(stops) if direction is Direction.BACKWARD else stops
        for branch in (Branch.PLUS, Branch.MINUS):
            path = run_branch(initial, branch, direction, run_stops)
            df = path_table(path)
            fits = []
            if direction is Direction.FORWARD:
                inner = terminal_segment(df, in_region(df, RegionKind.INSIDE_INNER))
                fits = _ring_fits(inner, a, 0.5 if branch is Branch.PLUS else None)
            _record(outcome, path, df, fits)
            runs[(branch, direction)] = (path, df)

    y0 = initial.y0
    lam_minus, lam_plus = lambda_roots(model, y0, initial.eta)
    identity = 0.0
    for direction in (Direction.FORWARD, Direction.BACKWARD):
        df = runs[(Branch.PLUS, direction)][1]
        rho = df["rho"].to_numpy()
        identity = max(identity, float(np.max(np.abs(df["delta2"].to_numpy() - (rho ** 2 - a ** 2) / rho ** 2))))

    planar = [p for p, _ in runs.values()]
    cert = kerr_turning_certificate(m, a, rho0)
    outcome.certificate = cert
    bwd_minus = runs[(Branch.MINUS, Direction.BACKWARD)][0]
    turns = bwd_minus.events_of(EventKind.TURNING_POINT)
    outcome.checks.update({
        "band": [model.horizon_rho, model.ergosphere_rho],
        "delta1_at_0": delta1(model, y0, initial.eta),
        "lambda_plus_at_0": lam_plus,
        "lambda_minus_at_0": lam_minus,
        "delta2_plus_identity_max": identity,
        "equatorial_trap_max": max(
            float(np.max(np.abs(np.concatenate([df["z"].to_numpy(), df["xi_z"].to_numpy()]))))
            for _, df in runs.values()
        ),
        "ring_after_horizons": all(_ring_order_ok(p) for p in planar),
        "minus_backward_turning_rho": turns[0].location.rho if turns else None,
        **conservation(planar),
    })
    if bump is not None:
        outcome.energy = superradiance_report(model, bump, initial.eta)
    outcome.notes.append("backward Minus truncated by the spiral rule; the approach is asymptotic")
    return outcome


def run_kerr_offequatorial(m: float = 1.0, a: float = 0.8, rho0: float = 2.0, z0: float = OFFEQ_Z0,
                           stops: StopSpec | None = None,
                           bump: BumpSpec | None = None) -> ScenarioOutcome:
    if not a < m:
        raise GateFailed(f"el caso fuera del ecuador requiere a < m (a={a}, m={m})")
    if z0 <= 0:
        raise GateFailed(f"se requiere z₀ > 0 (z₀={z0})")
    model = MetricModel.kerr(m, a)
    gate_kerr_ergoregion(model, rho0)
    initial = build_initial("eq-7.5", model, rho0, z0)
    log("scenario", f"kerr-offequatorial m={m} a={a} ρ₀={rho0} z₀={z0}")

    outcome = ScenarioOutcome(scenario_id="kerr-offequatorial",
                              parameters={"m": m, "a": a, "rho0": rho0, "z0": z0})
    for branch in (Branch.PLUS, Branch.MINUS):
        path = run_branch(initial, branch, Direction.FORWARD, stops)
        df = path_table(path)
        outcome.audits.extend(audit_path(path))

        # δ: distancia al anillo en el plano (ρ, z)
        inner = terminal_segment(df, in_region(df, RegionKind.INSIDE_INNER))
        gap, zs = inner["rho"].to_numpy() - a, inner["z"].to_numpy()
        delta = np.hypot(gap, zs)
        with np.errstate(all="ignore"):
            ddelta = (gap * inner["drho_dx0"].to_numpy() + zs * inner["dz_dx0"].to_numpy()) / delta
        funnel_fit = fit_power_law(delta, ddelta)
        fits = [funnel_fit]
        if branch is Branch.MINUS:
            d1_fit = fit_power_law(delta, inner["delta1"].to_numpy())
            fits.append(d1_fit)
            outcome.checks["delta1_minus_exponent"] = d1_fit.parameters.get("exponent")
        positive = zs > 0
        outcome.checks[f"funnel_{branch.value}"] = {
            "samples": int(positive.sum()),
            "delta_decreasing": bool(np.all(np.diff(delta[positive]) < 0)),
            "exponent": funnel_fit.parameters.get("exponent"),
            "z_min": float(df["z"].min()),
        }
        _record(outcome, path, df, fits)

    outcome.checks.update({
        "z_min": min(outcome.checks[f"funnel_{b.value}"]["z_min"] for b in (Branch.PLUS, Branch.MINUS)),
        "ring_after_horizons": all(_ring_order_ok(p) for p in outcome.paths.values()),
        **conservation(list(outcome.paths.values())),
    })
    if bump is not None:
        outcome.energy = superradiance_report(model, bump, initial.eta)
    outcome.notes.append("Minus oscillates in z about the equator before reaching the ring")
    return outcome


def _extremal(outcome: ScenarioOutcome, m: float, rho0: float, stops: StopSpec | None,
              x0_max: float) -> None:
    model = MetricModel.kerr(m, m)
    gate_kerr_ergoregion(model, rho0)
    initial = build_initial("eq-7.5", model, rho0)
    label = f"a={m:g}"
    base = stops or StopSpec()
    for branch in (Branch.PLUS, Branch.MINUS):
        path = run_branch(initial, branch, Direction.FORWARD, base)
        _record(outcome, path, path_table(path), [], label)

    back = base.model_copy(update={"x0_max": x0_max, "spiral_efolds": None})
    path = run_branch(initial, Branch.MINUS, Direction.BACKWARD, back)
    df = path_table(path)
    _record(outcome, path, df, [], label)

    # banda de (ρ−ρ̂₊)·|x₀| en la última década de la corrida
    tail = after_event(df, path, EventKind.TURNING_POINT)
    ax = np.abs(tail["x0"].to_numpy())
    gap = tail["rho"].to_numpy() - model.horizon_rho
    prod = gap[ax >= ax.max() / 10.0] * ax[ax >= ax.max() / 10.0] if ax.size else ax
    outcome.checks["extremal"] = {
        "product_min": float(prod.min()) if prod.size else None,
        "product_max": float(prod.max()) if prod.size else None,
        "band_ratio": float(prod.max() / prod.min()) if prod.size and prod.min() > 0 else None,
    }


def _naked(outcome: ScenarioOutcome, m: float, a: float, rho0: float,
           stops: StopSpec | None) -> dict:
    model = MetricModel.kerr(m, a)
    gate_kerr_ergoregion(model, rho0)
    initial = build_initial("eq-7.5", model, rho0)
    label = f"a={a:g}"
    cert = kerr_turning_certificate(m, a, rho0)

    path = run_branch(initial, Branch.MINUS, Direction.BACKWARD, stops)
    df = path_table(path)
    tail = after_event(df, path, EventKind.TURNING_POINT)
    core = terminal_segment(tail, tail["r"].to_numpy() < NAKED_CORE * m)
    fits = _ring_fits(core, a, 0.75)
    _record(outcome, path, df, fits, label)
    branch = outcome.branches[-1]
    return {
        "a": a,
        "certificate": cert.holds,
        "classification": branch.classification.value,
        "winding": branch.winding,
        "exponent": fits[0].parameters.get("exponent"),
        "phi_limit": fits[1].parameters.get("phi_limit"),
        "terminal_x0": branch.terminal_x0,
    }


def run_kerr_extremal_and_naked(m: float = 1.0, rho0: float = 2.0,
                                a_grid: tuple[float, ...] = NAKED_A_GRID,
                                extremal_x0_max: float = EXTREMAL_X0_MAX,
                                stops: StopSpec | None = None,
                                bump: BumpSpec | None = None) -> ScenarioOutcome:
    if any(a <= m for a in a_grid):
        raise GateFailed(f"la malla de a debe cumplir a > m (m={m}, a={list(a_grid)})")
    log("scenario", f"kerr-extremal-naked m={m} ρ₀={rho0} a∈{list(a_grid)}")
    outcome = ScenarioOutcome(scenario_id="kerr-extremal-naked",
                              parameters={"m": m, "rho0": rho0, "extremal_x0_max": extremal_x0_max})
    _extremal(outcome, m, rho0, stops, extremal_x0_max)

    naked = [_naked(outcome, m, a, rho0, stops) for a in sorted(a_grid, reverse=True)]
    windings = [n["winding"] or 0.0 for n in naked]
    outcome.certificate = kerr_turning_certificate(m, naked[-1]["a"], rho0)
    outcome.checks.update({
        "naked": naked,
        "winding_monotone": bool(np.all(np.diff(windings) > 0)),
        **conservation(list(outcome.paths.values())),
    })
    if bump is not None:
        model = MetricModel.kerr(m, naked[-1]["a"])
        initial = build_initial("eq-7.5", model, rho0)
        outcome.energy = superradiance_report(model, bump, initial.eta)
    outcome.notes.append("extremal backward Minus ends at MaxTime; the O(1/x₀) approach is asymptotic")
    return outcome
