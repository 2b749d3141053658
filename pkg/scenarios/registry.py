# scenarios/registry.py
"""
Registro de escenarios: id -> función. Los parámetros de cada función son
argumentos con nombre que coinciden con las claves de la config (A, B, m, a, rho0, z0, ...).
"""

from __future__ import annotations

import inspect
from typing import Callable

from common.errors import DomainError
from domain.outcome_models import ScenarioOutcome
from scenarios.acoustic import (
    run_acoustic_naked, run_acoustic_shortlived, run_acoustic_superradiant, run_white_hole,
)
from scenarios.kerr import run_kerr_equatorial, run_kerr_extremal_and_naked, run_kerr_offequatorial

SCENARIOS: dict[str, Callable[..., ScenarioOutcome]] = {
    "acoustic-superradiant": run_acoustic_superradiant,
    "acoustic-naked": run_acoustic_naked,
    "acoustic-shortlived": run_acoustic_shortlived,
    "white-hole": run_white_hole,
    "kerr-equatorial": run_kerr_equatorial,
    "kerr-offequatorial": run_kerr_offequatorial,
    "kerr-extremal-naked": run_kerr_extremal_and_naked,
}


def scenario_params(scenario_id: str) -> tuple[str, ...]:
    return tuple(inspect.signature(get_scenario(scenario_id)).parameters)


def get_scenario(scenario_id: str) -> Callable[..., ScenarioOutcome]:
    try:
        return SCENARIOS[scenario_id]
    except KeyError:
        raise DomainError(f"escenario desconocido: {scenario_id} (opciones: {', '.join(SCENARIOS)})") from None


def run_scenario(scenario_id: str, **params) -> ScenarioOutcome:
    """Llama al escenario con los parámetros que acepta; ignora el resto (p.ej. 'kind')."""
    fn = get_scenario(scenario_id)
    accepted = inspect.signature(fn).parameters
    return fn(**{k: v for k, v in params.items() if k in accepted and v is not None})
