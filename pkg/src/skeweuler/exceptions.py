"""Exception types shared across the package."""


class SkewEulerError(Exception):
    """Base class for all package errors."""


class DomainError(SkewEulerError, ValueError):
    """Input outside the mathematical domain of an operation (rho <= 0, p <= 0, ...)."""


class VacuumStateError(SkewEulerError, ValueError):
    """phi1 is zero (or numerically indistinguishable from it); ratio entries phi4/phi1 blow up."""


class ModelError(SkewEulerError, ValueError):
    """Invalid gas-model parameters (gamma outside (1, 2), alpha2 <= 0)."""


class NormalizationError(SkewEulerError, ValueError):
    """A direction vector that should be unit length is not."""


class SizeError(SkewEulerError, ValueError):
    """Grid or operator below the minimum size for the requested order."""


class CflError(SkewEulerError, ValueError):
    """Requested time step violates the CFL guard."""


class DivergenceError(SkewEulerError, RuntimeError):
    """Time integration produced NaN/Inf; carries the time stamp."""

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


class ConfigError(SkewEulerError, ValueError):
    """Run-configuration file problem; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
