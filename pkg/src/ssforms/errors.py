"""Exception hierarchy.

Each family maps to one CLI exit code: input problems exit 1, a falsified
theorem instance exits 2, an exhausted resource or precision budget exits 3.
"""


class SSFormsError(Exception):
    exit_code = 1


class DomainError(SSFormsError, ValueError):
    """Argument outside the domain of an operation."""


class ModulusMismatch(DomainError):
    pass


class SplitError(DomainError):
    """No F_p-rational kernel with the requested Frobenius eigenvalue."""


class TheoremViolation(SSFormsError):
    """A computed instance contradicts a statement the library verifies."""

    exit_code = 2


class BoundError(SSFormsError):
    """A bounded search ran out before finding an answer."""

    exit_code = 3


class PrecisionError(BoundError):
    """Complex evaluation did not round to integers within tolerance."""
