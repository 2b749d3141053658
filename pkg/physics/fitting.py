# physics/fitting.py
"""
Ajustes de tasas asintóticas sobre la cola de una trayectoria.

Todas las leyes se reducen a una recta en coordenadas transformadas:
  ExpDecay          ln D        vs x₀
  OneOverX0         1/D         vs |x₀|
  FiniteTimePower   ln|dρ/dx₀|  vs ln(ρ−a)   -> exponente 1/(1−pendiente)
  PhiLogDivergence  ln|dφ/dρ|   vs ln ρ
  PowerLaw          ln|y|       vs ln x
  PhiLimit          φ           vs (ρ−a)^p   -> φ_limit = ordenada en el origen

Ventana fija: el 30% final del recorrido de la abscisa, remuestreado uniforme.
Un ajuste con R² < MIN_R2 queda marcado como no aceptado.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import linregress

from domain.outcome_models import FitLaw, FitResult

TAIL_FRACTION = 0.3
MIN_R2 = 0.98
RESAMPLE = 200


def _clean(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = np.isfinite(x) & np.isfinite(y)
    return x[keep], y[keep]


def tail_window(x, y, fraction: float = TAIL_FRACTION, n: int = RESAMPLE):
    """
    (grid, y(grid), ventana, muestras en ventana) para el tramo final de x
    recorrido en el orden de la trayectoria; None si no hay datos suficientes.
    """
    x, y = _clean(x, y)
    if len(x) < 3 or x[-1] == x[0]:
        return None
    start, end = x[0], x[-1]
    cut = end - fraction * (end - start)
    xs, idx = np.unique(x, return_index=True)
    ys = y[idx]
    grid = np.linspace(cut, end, n)
    lo, hi = min(cut, end), max(cut, end)
    inside = int(np.count_nonzero((x >= lo) & (x <= hi)))
    return grid, np.interp(grid, xs, ys), (float(cut), float(end)), inside


def _unresolved(law: FitLaw) -> FitResult:
    return FitResult(law=law, parameters={}, r_squared=0.0, window=(0.0, 0.0),
                     n_samples=0, accepted=False)


def _line(law: FitLaw, x, y, fraction: float = TAIL_FRACTION) -> tuple[FitResult, float, float]:
    win = tail_window(x, y, fraction)
    if win is None:
        return _unresolved(law), float("nan"), float("nan")
    grid, values, window, inside = win
    res = linregress(grid, values)
    r2 = float(res.rvalue) ** 2 if np.isfinite(res.rvalue) else 0.0
    fit = FitResult(
        law=law,
        parameters={"slope": float(res.slope), "intercept": float(res.intercept)},
        r_squared=r2, window=window, n_samples=inside, accepted=r2 >= MIN_R2,
    )
    return fit, float(res.slope), float(res.intercept)


def _with(fit: FitResult, **extra: float) -> FitResult:
    if not fit.parameters:
        return fit
    return fit.model_copy(update={"parameters": {**fit.parameters, **extra}})


def fit_exp_decay(x0, dist) -> FitResult:
    """D ~ C·exp(−κ|x₀|): pendiente de ln D frente a x₀."""
    x0, dist = _clean(x0, dist)
    keep = dist > 0
    fit, slope, _ = _line(FitLaw.EXP_DECAY, x0[keep], np.log(dist[keep]))
    return _with(fit, rate=abs(slope))


def fit_one_over_x0(x0, dist) -> FitResult:
    """D ~ c/|x₀|: 1/D lineal en |x₀|; añade el rango de D·|x₀| en la ventana."""
    x0, dist = _clean(x0, dist)
    keep = dist > 0
    ax, d = np.abs(x0[keep]), dist[keep]
    fit, slope, _ = _line(FitLaw.ONE_OVER_X0, ax, 1.0 / d)
    if not fit.parameters:
        return fit
    lo, hi = sorted(fit.window)
    sel = (ax >= lo) & (ax <= hi)
    prod = d[sel] * ax[sel]
    if prod.size == 0:
        return fit
    return _with(fit, coefficient=1.0 / slope if slope else float("inf"),
                 product_min=float(prod.min()), product_max=float(prod.max()))


def fit_finite_time_power(gap, rate) -> FitResult:
    """gap = ρ−a, rate = dρ/dx₀; si ρ−a ~ (t₀−x₀)^p entonces p = 1/(1−pendiente)."""
    gap, rate = _clean(gap, rate)
    keep = (gap > 0) & (rate != 0)
    fit, slope, _ = _line(FitLaw.FINITE_TIME_POWER, np.log(gap[keep]), np.log(np.abs(rate[keep])))
    if not fit.parameters or slope == 1.0:
        return fit
    return _with(fit, exponent=1.0 / (1.0 - slope))


def fit_phi_log_divergence(rho, dphi_drho) -> FitResult:
    rho, dphi = _clean(rho, dphi_drho)
    keep = (rho > 0) & (dphi != 0)
    fit, slope, _ = _line(FitLaw.PHI_LOG_DIVERGENCE, np.log(rho[keep]), np.log(np.abs(dphi[keep])))
    return _with(fit, exponent=slope)


def fit_power_law(x, y) -> FitResult:
    x, y = _clean(x, y)
    keep = (x > 0) & (y != 0)
    fit, slope, _ = _line(FitLaw.POWER_LAW, np.log(x[keep]), np.log(np.abs(y[keep])))
    return _with(fit, exponent=slope)


def fit_phi_limit(gap, phi, power: float) -> FitResult:
    """φ ≈ φ_limit + C·(ρ−a)^power; la ventana se toma en ln(ρ−a)."""
    gap, phi = _clean(gap, phi)
    keep = gap > 0
    gap, phi = gap[keep], phi[keep]
    win = tail_window(np.log(gap), phi)
    if win is None:
        return _unresolved(FitLaw.PHI_LIMIT)
    grid, values, window, inside = win
    res = linregress(np.exp(grid) ** power, values)
    r2 = float(res.rvalue) ** 2 if np.isfinite(res.rvalue) else 0.0
    return FitResult(
        law=FitLaw.PHI_LIMIT,
        parameters={"phi_limit": float(res.intercept), "coefficient": float(res.slope), "power": power},
        r_squared=r2, window=window, n_samples=inside, accepted=r2 >= MIN_R2,
    )
