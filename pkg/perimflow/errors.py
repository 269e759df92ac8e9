"""
Exceptions raised by perimflow.

The CLI maps these onto exit codes (see perimflow/cli/README.md).
"""


class DomainError(ValueError):
    "Raised when an argument lies outside the domain of a function."


class ConfigurationError(ValueError):
    "Raised for unusable surfaces, samplers or scenario settings."


class RegimeError(ConfigurationError):
    "Raised if a is too large for the node spacing of a surface."


class AccuracyError(RuntimeError):
    """
    Raised if a quadrature could not reach the requested tolerance.

    The best available estimate is kept so callers can still log it.
    """

    def __init__(self, message, best_estimate=None, abs_err=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.abs_err = abs_err
