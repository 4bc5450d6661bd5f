"""
Exception hierarchy shared by the library and the command line front end.
"""


class HessianLVError(Exception):
    """Base class for every error raised by hessian_lv."""

    exit_code = 1


class DomainError(HessianLVError, ValueError):
    """Parameters violate an admissibility inequality or an operation's domain."""

    exit_code = 2


class RegimeError(HessianLVError):
    """The operation is refused in the current stability regime."""

    exit_code = 3


class NonConvergence(HessianLVError):
    """A numerical procedure ran out of budget or failed a step."""

    exit_code = 3


class DegenerateInput(HessianLVError):
    """Input data cannot be transformed (for instance a vanishing derivative)."""

    exit_code = 3


class OutputError(HessianLVError):
    """Results could not be written."""

    exit_code = 4
