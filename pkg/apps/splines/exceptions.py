"""
Errors raised by the spline, fitting and simulation services.

Every error derives from SplineError so views and management commands can
translate the whole family into a 400 response or a validation exit code.
"""


class SplineError(Exception):
    """Base class for all domain errors"""


class InvalidArgumentError(SplineError, ValueError):
    """An argument is outside its admissible range"""


class KnotValidationError(SplineError):
    """A knot sequence violates one or more structural invariants"""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__('; '.join(self.violations) or 'invalid knot sequence')


class KnotPlacementError(SplineError):
    """Automatic placement produced tied interior knots"""

    def __init__(self, message, level=None):
        self.level = level
        super().__init__(message)


class OutOfDomainError(SplineError):
    """Evaluation requested outside [a, b]"""


class SingularWeightError(SplineError):
    """A lag difference of knots is zero inside a weighting window"""


class NumericalError(SplineError):
    """A factorization that must succeed for valid input failed"""


class RankDeficiencyError(SplineError):
    """The penalized normal equations are singular"""

    def __init__(self, message, columns=None):
        self.columns = columns
        super().__init__(message)


class ConfigurationError(SplineError):
    """Inconsistent combination of fitting options"""


class NumericalCheckError(SplineError):
    """A comparison against an independent oracle exceeded its tolerance"""
