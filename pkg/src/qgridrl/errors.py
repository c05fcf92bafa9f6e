"""Exception types raised across the package."""


class QGridError(Exception):
    """Base class for all package errors."""


class InvalidGateError(QGridError, ValueError):
    pass


class InvalidArgumentError(QGridError, ValueError):
    pass


class InvalidDistributionError(QGridError, ValueError):
    pass


class InvalidParametersError(QGridError, ValueError):
    pass


class InvalidExpectationError(QGridError, ValueError):
    pass


class ShapeError(QGridError, ValueError):
    pass


class ConfigError(QGridError, ValueError):
    """Bad run configuration; ``key`` names the offending entry."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class BackendUnavailableError(QGridError, RuntimeError):
    """The quantum backend could not produce a result."""


class TrainingAborted(QGridError, RuntimeError):
    """Training stopped early; ``checkpoint`` points at the resumable state."""

    def __init__(self, message, checkpoint=None):
        super().__init__(message)
        self.checkpoint = checkpoint
