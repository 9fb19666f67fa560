"""Exception types shared across the package."""


class ClusterSolError(Exception):
    """Base class for all errors raised by this package."""


# --- tame field ---

class NonOddPrime(ClusterSolError):
    pass


class WildRamification(ClusterSolError):
    pass


class DivisionByZero(ClusterSolError):
    pass


class ZeroElement(ClusterSolError):
    pass


class PrecisionExhausted(ClusterSolError):
    pass


class NoSquareRoot(ClusterSolError):
    """Raised when an element has no square root in the tower.

    ``reason`` is one of ``"odd-valuation"`` or ``"non-residue"``.
    """

    def __init__(self, reason):
        super().__init__(f"no square root: {reason}")
        self.reason = reason


# --- curve input ---

class ParseError(ClusterSolError):
    pass


class UnsupportedFactor(ClusterSolError):
    pass


class DegreeTooSmall(ClusterSolError):
    pass


class NotGaloisClosed(ClusterSolError):
    pass


class WildInput(ClusterSolError):
    pass


class RootCollision(ClusterSolError):
    pass


class AmbiguousMatch(ClusterSolError):
    pass


class NonRationalCoefficient(ClusterSolError):
    pass


# --- oracle ---

class NotSquarefree(ClusterSolError):
    pass


class InternalError(ClusterSolError):
    pass
