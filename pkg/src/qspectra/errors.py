"""Exception types raised across qspectra."""


class QSpectraError(Exception):
    """Base class for all library errors."""


class MissingAssignment(QSpectraError, KeyError):
    """An evaluation point does not assign a variable that occurs."""


class ZeroBaseNegativeExponent(QSpectraError, ZeroDivisionError):
    """A variable carrying a negative exponent was evaluated at zero."""


class DenominatorVanishes(QSpectraError, ZeroDivisionError):
    """A rational function denominator evaluated or substituted to zero."""


class NotDivisible(QSpectraError, ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


class OrderMismatch(QSpectraError, ValueError):
    pass


class FormalVarMismatch(QSpectraError, ValueError):
    pass


class NonUnitConstantTerm(QSpectraError, ValueError):
    pass


class NotFormalVariable(QSpectraError, ValueError):
    pass


class IndexOutOfRange(QSpectraError, IndexError):
    pass


class OrderExceeded(QSpectraError, ValueError):
    """Requested kmax is larger than the configured series order."""


class ResampleCapExceeded(QSpectraError, RuntimeError):
    """Every random evaluation point hit a vanishing denominator."""


class IdentityMismatch(QSpectraError, AssertionError):
    """Two sides of an identity that must agree were found to differ."""
