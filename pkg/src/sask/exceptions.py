"""Exception and warning types shared across the solver."""


class SaskError(Exception):
    """Base class for solver errors."""


class ConfigError(SaskError):
    """Invalid configuration value (bad level, gamma, radius, ...)."""


class ConditioningError(SaskError):
    """A linear system is singular to working tolerance."""

    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class EvaluationError(SaskError):
    """The dynamics returned a non-finite value."""


class DecompositionError(SaskError):
    """The eigenvalue solver failed."""


class DivergenceError(SaskError):
    """The solver state became non-finite."""


class ConditioningWarning(UserWarning):
    """A matrix is ill-conditioned enough to endanger accuracy."""


class ImagResidualWarning(UserWarning):
    """The discarded imaginary part of a reconstructed state is large."""
