"""Exception hierarchy.

Contract violations (bad arguments, exterior points) and numerical failures
(poles, non-convergence, unusable integrals) are kept apart so the CLI can
map them onto distinct exit codes.
"""


class HartogsError(Exception):
    """Base class for all package errors."""


class ContractViolation(HartogsError, ValueError):
    """An argument breaks an operation's precondition."""


class SingularPointError(ContractViolation):
    """The base coordinate is zero where a map divides by it."""


class NumericalError(HartogsError, ArithmeticError):
    """A computation could not produce a finite, trustworthy number."""


class PoleError(NumericalError):
    """A kernel denominator is exactly zero."""


class ConvergenceError(NumericalError):
    """A truncated series did not settle within its expansion cap."""


class IntegrationError(NumericalError):
    """An integrand produced non-finite values beyond what is tolerated."""
