"""Exception types shared across the package."""


class DimensionCapError(ValueError):
    """A matrix product would exceed the configured per-side dimension cap."""

    def __init__(self, message, requested=None, cap=None):
        super().__init__(message)
        self.requested = requested
        self.cap = cap


class GepConvergenceError(RuntimeError):
    """The QZ iteration failed to converge; carries backend diagnostics."""

    def __init__(self, message, info=None):
        super().__init__(message)
        self.info = info


class ValidationError(ValueError):
    """A problem or parameter set violates a structural invariant."""


class ProblemFormatError(ValueError):
    """A problem file could not be parsed; names the offending field."""


class UnsupportedDegreeError(ValueError):
    """Polynomial degree above two; linearization is only defined for quadratics."""


class SingularStructureError(RuntimeError):
    """Compression stalled before reaching a full-rank leading determinant."""

    def __init__(self, message, stage_log=None):
        super().__init__(message)
        self.stage_log = stage_log or []
