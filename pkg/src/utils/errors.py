"""Exception hierarchy for adhmlab."""


class AdhmLabError(Exception):
    """Base class for every domain failure raised by the library."""


class FieldError(AdhmLabError):
    """Bad field tag or illegal arithmetic (division by zero, non-prime modulus)."""


class MixedField(AdhmLabError):
    """Operands live over different coefficient fields."""


class DimMismatch(AdhmLabError):
    """Shapes of matrices or spaces do not fit together."""


class SingularSystem(AdhmLabError):
    """A linear system has no unique solution."""


class SpectraOverlap(SingularSystem):
    """A Sylvester equation is singular because the two spectra meet."""


class OddSymplectic(AdhmLabError):
    """A symplectic form was requested on an odd-dimensional space."""


class InvariantViolation(AdhmLabError):
    """A datum or computed result breaks one of its structural constraints."""


class IrreducibleFactor(AdhmLabError):
    """A characteristic polynomial does not split over the base field."""


class NotInGroup(AdhmLabError):
    """A matrix does not lie in the requested group."""


class OutOfRange(AdhmLabError):
    """A numeric argument is outside the range where a formula applies."""


class WrongStratum(AdhmLabError):
    """A current vector is not in the rank stratum an operation needs."""


class BadRank(AdhmLabError):
    """Source rank r is too small for the current algebra calculus."""


class TooLarge(AdhmLabError):
    """An exhaustive enumeration exceeds the configured point budget."""


class FlavorMismatch(AdhmLabError):
    """Blocks or inputs mix ADHM flavors or framing spaces."""


class BadShape(AdhmLabError):
    """Inputs do not have the shape an operation is defined for."""


class NotNilpotent(AdhmLabError):
    pass


class NotSelfAdjoint(AdhmLabError):
    pass


class NotEvenType(AdhmLabError):
    """A symplectic construction got a partition that is not of even type."""


class RuleUnavailable(AdhmLabError):
    """No Δ value is available for a diagram under the configured rule."""


class MissingComponent(AdhmLabError):
    """An O(k) invariant computation was asked for without the extra component."""


class WorkLimit(AdhmLabError):
    """A graded computation would exceed the configured monomial budget."""


class ParseError(AdhmLabError):
    """Malformed input JSON; `location` points at the offending element."""

    def __init__(self, message: str, location: str = '$'):
        super().__init__(f"{message} (at {location})")
        self.location = location
