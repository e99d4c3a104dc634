"""Exception types shared across the simulator."""


class QrsimError(Exception):
    """Base class for all simulator errors."""


class InvalidDimensionError(QrsimError):
    """Operator dimensions are incompatible or below the allowed minimum."""


class SingularMatrixError(QrsimError):
    """Linear solve hit a pivot below the singularity threshold."""


class ContractViolationError(QrsimError):
    """An input violated a documented precondition (e.g. non-Hermitian H)."""


class DispersiveRegimeError(QrsimError):
    """Dispersive-shift estimate requested at or too close to resonance."""


class StiffnessError(QrsimError):
    """Adaptive integrator step size underflowed."""


class InvariantDriftError(QrsimError):
    """Density-matrix trace drifted beyond the tolerated bound."""


class ConfigError(QrsimError):
    """Malformed or inconsistent run configuration."""
