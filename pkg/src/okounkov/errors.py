"""Exception hierarchy shared across the library."""


class OkounkovError(Exception):
    """Base class for all library errors."""


class NotFullRank(OkounkovError):
    """A lattice does not span the expected direction space."""


class DimensionMismatch(OkounkovError):
    pass


class NoSamples(OkounkovError):
    pass


class EmptyBody(OkounkovError):
    pass


class DegreeZeroNontrivial(OkounkovError):
    """A nonzero degree-0 generator contradicts linear boundedness."""


class NotLinearlyBounded(OkounkovError):
    pass


class AnchorNotInSemigroup(OkounkovError):
    pass


class BoundaryCone(OkounkovError):
    """A test cone touches the boundary of the semigroup cone off the origin."""


class ZeroPolynomial(OkounkovError):
    pass


class ValueCollision(OkounkovError):
    """Two independent basis elements received the same valuation."""


class CenterInSupport(OkounkovError):
    """The divisor representative does not avoid the valuation center."""


class NotFixedPoint(OkounkovError):
    pass


class NotAmple(OkounkovError):
    pass


class BTooSmall(OkounkovError):
    """Bundle twist must exceed the pseudo-effective threshold."""


class DimensionTooHigh(OkounkovError):
    pass


class SchemaError(OkounkovError):
    """A problem spec fails validation; carries a JSON pointer path."""

    def __init__(self, message, pointer="/"):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


class ParseError(OkounkovError):
    pass
