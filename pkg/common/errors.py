# common/errors.py
"""
Errores del simulador.
Cada clase lleva el código de salida que usa la CLI (0 ok, 2 config o dominio, 3 numérico, 4 gate o auditoría).
"""

from __future__ import annotations


class SuperradianceError(Exception):
    exit_code = 1


class DomainError(SuperradianceError, ValueError):
    """Entrada fuera del dominio de la operación (η nulo, ρ negativo, ...)."""
    exit_code = 2


class DegeneratePoint(SuperradianceError):
    """Punto sobre el anillo/disco de Kerr o sobre el eje acústico."""
    exit_code = 2


class HorizonQuotient(SuperradianceError):
    """El cociente dρ/dx₀ degenera (|∂H/∂ξ₀| casi nulo)."""
    exit_code = 3


class NumericalFailure(SuperradianceError):
    exit_code = 3


class QuadratureNonConvergence(SuperradianceError):
    exit_code = 3


class AuditViolation(SuperradianceError):
    """Una desigualdad auditada falló más allá de la tolerancia: es un bug, no física."""
    exit_code = 4


class GateFailed(SuperradianceError):
    """Los parámetros no cumplen la condición previa del escenario."""
    exit_code = 4


class SerializationError(SuperradianceError):
    exit_code = 3


class ConfigError(SuperradianceError):
    """Config inválida. `errors` lista todos los problemas como (línea, mensaje)."""
    exit_code = 2

    def __init__(self, errors: list[tuple[int, str]]):
        self.errors = list(errors)
        lines = [f"línea {ln}: {msg}" if ln else msg for ln, msg in self.errors]
        super().__init__("config inválida:\n  " + "\n  ".join(lines))
