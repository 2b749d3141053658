"""
Fixtures compartidas: modelos de referencia, escenas iniciales y una trayectoria sintética
para las pruebas de serialización (sin integrar).
"""

import math

import pytest

from domain.metric_models import MetricModel, RegionKind, SpatialPoint
from domain.path_models import (
    Branch, Covector, Direction, Event, EventKind, GeodesicPath, PhaseState,
    SampleDiagnostics,
)
from scenarios.presets import build_initial


@pytest.fixture
def acoustic_model():
    return MetricModel.acoustic(-1.0, 10.0)


@pytest.fixture
def kerr_model():
    return MetricModel.kerr(1.0, 0.8)


@pytest.fixture
def superradiant_initial(acoustic_model):
    """A=−1, B=10, ρ₀=2.5 con η = (−0.8, −1.5, 0)."""
    return build_initial("eq-4.9", acoustic_model, 2.5)


@pytest.fixture
def kerr_initial(kerr_model):
    return build_initial("eq-7.5", kerr_model, 2.0)


def make_path(n: int = 5, bad_value: float | None = None, failed: bool = False) -> GeodesicPath:
    model = MetricModel.acoustic(-1.0, 10.0)
    samples, diags = [], []
    for i in range(n):
        rho = 2.5 + 0.1 * i + 1.0 / 3.0 * 1e-3
        samples.append(PhaseState(
            s=0.1 * i, x0=0.25 * i,
            p=SpatialPoint(rho=rho, phi=0.01 * i * math.pi, z=0.0),
            xi=Covector(xi0=3.08, xi_rho=-0.8 + 0.01 * i, xi_phi=-1.5, xi_z=0.0),
        ))
        h = 1e-13 * i if bad_value is None or i != n - 1 else bad_value
        diags.append(SampleDiagnostics(h_residual=h, delta1=1.0 + 0.1 * i, delta2=0.5,
                                       region=RegionKind.ERGOREGION))
    events = [Event(kind=EventKind.ESCAPE, s=samples[-1].s, x0=samples[-1].x0,
                    location=samples[-1].p, data=0.4)]
    if failed:
        events.append(Event(kind=EventKind.NUMERICAL_FAILURE, s=samples[-1].s,
                            x0=samples[-1].x0, location=samples[-1].p))
    return GeodesicPath(model=model, branch=Branch.PLUS, direction=Direction.FORWARD,
                        samples=samples, events=events, diagnostics=diags)


@pytest.fixture
def synthetic_path():
    return make_path()


@pytest.fixture
def path_factory():
    return make_path


KERR_CONFIG = """\
# Kerr ecuatorial
metric.kind = kerr
metric.m = 1.0
metric.a = 0.8
initial.preset = eq-7.5
initial.rho0 = 2.0
"""


@pytest.fixture
def kerr_config_text():
    return KERR_CONFIG
