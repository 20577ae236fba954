"""Exception types shared across the pipeline."""


class ContrarecError(Exception):
    """Base class for all pipeline errors."""


class DataFormatError(ContrarecError):
    """An input file violates its documented format. Message names the offending line."""


class ConvergenceError(ContrarecError):
    """An iterative solver exhausted its iteration cap."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class MissingArtifactError(ContrarecError):
    """A pipeline stage was invoked before its upstream stage. Message names the missing stage."""

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class EmptyPoolError(ContrarecError):
    """No candidate items remain for a user."""
