"""Exception hierarchy.

Two families: ``ValidationError`` for structurally bad input (CLI exit
code 2) and ``ResourceLimitError`` for exceeded budgets or series
cutoffs (CLI exit code 3).
"""


class ValidationError(ValueError):
    """Input violates a documented precondition."""


class ResourceLimitError(RuntimeError):
    """A configured budget, cutoff, or tolerance cannot be met."""


class NotMonic(ValidationError):
    pass


class NotSquarefree(ValidationError):
    pass


class NotTotallyReal(ValidationError):
    pass


class NotPrime(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass


class EmptyGrid(ValidationError):
    pass


class NotAUnit(ValidationError):
    pass


class DependentUnits(ValidationError):
    pass


class WrongRank(ValidationError):
    pass


class RegulatorMismatch(ValidationError):
    pass


class CutoffTooSmall(ResourceLimitError):
    pass


class CutoffMismatch(ResourceLimitError):
    pass


class BoxTooLarge(ResourceLimitError):
    pass
