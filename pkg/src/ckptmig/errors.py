"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter lies outside the domain an operation is defined on."""


class UndefinedImprovementError(ValueError):
    """Relative improvement is undefined because the baseline throughput is zero."""


class InfeasibleSpareCountError(RuntimeError):
    """No spare count can reach the requested success probability.

    Only possible with the lower-bound sizing method, whose sum stays
    strictly below 1 for any positive unavailability.
    """
