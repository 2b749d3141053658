# domain/outcome_models.py
"""
Modelos Pydantic del resultado de un escenario.
"""

from __future__ import annotations

from enum import Enum
from typing import Any

from pydantic import BaseModel, Field

from domain.energy_models import EnergyReport, KerrTurningCertificate, TurningReport
from domain.path_models import Branch, Direction, EventKind, GeodesicPath


class Classification(str, Enum):
    ESCAPES_TO_INFINITY = "EscapesToInfinity"
    CROSSES_OUTER_HORIZON = "CrossesOuterHorizon"
    CROSSES_INNER_HORIZON = "CrossesInnerHorizon"
    TERMINATES_ON_RING = "TerminatesOnRing"
    TERMINATES_AT_CENTER = "TerminatesAtCenter"
    ASYMPTOTIC_HORIZON_APPROACH = "AsymptoticHorizonApproach"
    TURNS_THEN_ESCAPES = "TurnsThenEscapes"
    UNRESOLVED = "Unresolved"


class FitLaw(str, Enum):
    EXP_DECAY = "ExpDecay"
    ONE_OVER_X0 = "OneOverX0"
    FINITE_TIME_POWER = "FiniteTimePower"
    PHI_LOG_DIVERGENCE = "PhiLogDivergence"
    POWER_LAW = "PowerLaw"
    PHI_LIMIT = "PhiLimit"


class FitResult(BaseModel):
    law: FitLaw
    parameters: dict[str, float]
    r_squared: float
    window: tuple[float, float]
    n_samples: int
    accepted: bool


class EventTime(BaseModel):
    kind: EventKind
    x0: float


class BranchOutcome(BaseModel):
    branch: Branch
    direction: Direction
    classification: Classification
    events: list[EventTime] = Field(default_factory=list)
    fits: list[FitResult] = Field(default_factory=list)
    winding: float | None = Field(None, description="Vueltas desde el punto de retorno")
    terminal_x0: float | None = None
    label: str = Field("", description="Distingue corridas repetidas (p.ej. \"a=1.05\")")

    def fit(self, law: FitLaw) -> FitResult | None:
        return next((f for f in self.fits if f.law is law), None)


class AuditRecord(BaseModel):
    name: str
    checked_samples: int
    min_margin: float = Field(..., description="mín (lado izq − lado der)/escala; >= −tol es válido")
    passed: bool


class ScenarioOutcome(BaseModel):
    scenario_id: str
    parameters: dict[str, float]
    branches: list[BranchOutcome] = Field(default_factory=list)
    turning: list[TurningReport] = Field(default_factory=list)
    certificate: KerrTurningCertificate | None = None
    energy: EnergyReport | None = None
    audits: list[AuditRecord] = Field(default_factory=list)
    checks: dict[str, Any] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)
    paths: dict[str, GeodesicPath] = Field(default_factory=dict, exclude=True)

    def branch(self, branch: Branch, direction: Direction, label: str = "") -> BranchOutcome:
        for b in self.branches:
            if b.branch is branch and b.direction is direction and b.label == label:
                return b
        raise KeyError(f"{branch.value}/{direction.value} {label}".strip())
