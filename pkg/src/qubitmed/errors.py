"""Exception hierarchy shared by the solvers and verifiers."""


class QubitMedError(Exception):
    """Base class for every error raised by this package."""


class NonPhysicalDensity(QubitMedError, ValueError):
    pass


class NonPhysicalBloch(QubitMedError, ValueError):
    pass


class BadPriors(QubitMedError, ValueError):
    pass


class DegenerateHyperbola(QubitMedError, ValueError):
    """The prior gap is not smaller than the side length (``l <= e``)."""


class Unbounded(QubitMedError, ValueError):
    """The hyperbola branch never reaches the requested direction."""


class NoIntersection(QubitMedError, ValueError):
    """The two hyperbola branches do not meet inside the vertex angle."""


class WrongShape(QubitMedError, ValueError):
    pass


class Infeasible(QubitMedError, ValueError):
    pass


class Unrealizable(QubitMedError, ValueError):
    """No three Bloch vectors have the requested Gram data."""


class DegenerateRadius(QubitMedError, ArithmeticError):
    pass


class NoValidPovm(QubitMedError, ArithmeticError):
    pass


class InvalidPovm(QubitMedError, ValueError):
    pass


class TooManyStates(QubitMedError, ValueError):
    pass


class NoConvergence(QubitMedError, ArithmeticError):
    pass
