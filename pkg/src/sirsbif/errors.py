"""Exception types shared across the package."""


class SirsbifError(Exception):
    """Base class for all package errors."""


class DomainError(SirsbifError):
    """An input violates a mathematical precondition (parameter region, sign constraint)."""


class ConfigError(SirsbifError):
    """A scenario configuration file is malformed or inconsistent."""


class ConvergenceError(SirsbifError):
    """A bracketed root failed to polish to tolerance.

    Carries the offending bracket as ``.bracket`` when available.
    """

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class IllConditioned(SirsbifError):
    """A linear solve in the focal-value hierarchy exceeded its residual budget."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class NoReturn(SirsbifError):
    """A trajectory left the section neighbourhood or exhausted its time budget
    before returning; signals non-oscillatory dynamics at that radius."""


class Inconclusive(SirsbifError):
    """Displacement refinement hit the resolution floor without a sign decision.

    Carries the sampled displacement table as ``.samples``.
    """

    def __init__(self, message, samples=None):
        super().__init__(message)
        self.samples = samples


class StepSizeUnderflow(SirsbifError):
    """The adaptive integrator's step size collapsed below the representable floor."""

    def __init__(self, message, t=None, state=None):
        super().__init__(message)
        self.t = t
        self.state = state


class BlowUp(SirsbifError):
    """A trajectory left the sanity bounding box; indicates an internal bug,
    since the biologically admissible region is forward invariant."""


class UnknownFigure(SirsbifError):
    """Requested figure id is not in the registry."""
