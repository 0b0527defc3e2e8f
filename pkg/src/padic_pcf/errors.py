"""Exception hierarchy shared by all modules."""


class PcfError(ValueError):
    """Base class for every error raised by this package."""


class InvalidPrime(PcfError):
    pass


class NotInO(PcfError):
    """A value is not in Z[1/p]."""


class ZeroInput(PcfError):
    pass


class EmptyInput(PcfError):
    pass


class NoSquareRoot(PcfError):
    """The argument is not a square in Q_p."""


class NotInQp(PcfError):
    """The roots of a quadratic polynomial do not lie in P^1(Q_p)."""


class ZeroPolynomial(PcfError):
    pass


class PrecisionExhausted(PcfError, ArithmeticError):
    """Cancellation consumed every known p-adic digit."""


class NotConvergent(PcfError):
    pass


class RootInput(PcfError):
    pass


class ZeroLeadingCoeff(PcfError):
    pass


class PerfectSquare(PcfError):
    pass


class NotSquareFree(PcfError):
    pass


class NoNegativePell(PcfError):
    pass


class NotDegenerate(PcfError):
    pass


class DegenerateDenominator(PcfError):
    pass
