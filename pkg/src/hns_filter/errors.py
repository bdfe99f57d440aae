"""Exception hierarchy. Every failure carries the process exit code it maps to."""

from __future__ import annotations

from collections.abc import Sequence

from .config import EXIT_INFEASIBLE, EXIT_NUMERICAL, EXIT_PARSE


class HnsFilterError(Exception):
    """Base class for every failure the toolkit reports."""

    exit_code: int = EXIT_NUMERICAL


# --- Parse / usage ----------------------------------------------------------
class FilterParseError(HnsFilterError):
    exit_code = EXIT_PARSE


class TableMismatchError(HnsFilterError, ValueError):
    """Operands belong to different algebra tables."""

    exit_code = EXIT_PARSE


class TableError(HnsFilterError):
    """A multiplication table fails its structural checks."""

    exit_code = EXIT_PARSE


# --- Infeasible -------------------------------------------------------------
class InfeasibleError(HnsFilterError):
    exit_code = EXIT_INFEASIBLE


class NoRealSolution(InfeasibleError):
    def __init__(self, best_residual: float) -> None:
        super().__init__(
            f"denominator system has no real solution on this branch "
            f"(best residual {best_residual:.3e})"
        )
        self.best_residual = best_residual


class SingularSystem(InfeasibleError):
    def __init__(self, condition: float) -> None:
        super().__init__(f"numerator system is singular (condition {condition:.3e})")
        self.condition = condition


class AllPointsInfeasible(InfeasibleError):
    pass


class StalledAtInfeasible(InfeasibleError):
    def __init__(self, point: tuple[float, float], value: float) -> None:
        super().__init__(
            f"simplex stalled against the infeasible region near "
            f"a3={point[0]:.6g}, b2={point[1]:.6g}"
        )
        self.point = point
        self.value = value


class NoIsomorphismFound(InfeasibleError):
    pass


# --- Numerical --------------------------------------------------------------
class NumericalError(HnsFilterError):
    exit_code = EXIT_NUMERICAL


class NearZeroNorm(NumericalError):
    def __init__(self, norm: complex) -> None:
        super().__init__(f"element is singular (norm {norm:.3e})")
        self.norm = norm


class PoleAtFrequency(NumericalError):
    def __init__(self, omega: float) -> None:
        super().__init__(f"transfer function has a pole at omega={omega:.6g}")
        self.omega = omega


class MagnitudeUnderflow(NumericalError):
    def __init__(self, omega: float) -> None:
        super().__init__(f"|H| underflows at omega={omega:.6g}")
        self.omega = omega


class DivisionByZeroSensitivity(NumericalError):
    def __init__(self, omegas: Sequence[float]) -> None:
        listed = ", ".join(f"{w:.6g}" for w in omegas)
        super().__init__(f"real-filter sensitivity vanishes at omega = {listed}")
        self.omegas = tuple(omegas)
