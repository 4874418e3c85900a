"""Exception hierarchy.

Every domain error derives from :class:`ToricError`; the CLI reports the
class name and exits with status 1.  :class:`InputError` subclasses signal
malformed user input (expressions, documents) and map to exit status 2.
"""


class ToricError(Exception):
    """Base class for all domain errors raised by this package."""


class InputError(ToricError):
    """Malformed user input rather than a mathematical obstruction."""


# lattice
class NormalsDoNotSpan(ToricError):
    pass


class NotInSupport(ToricError):
    pass


class NotUnimodular(ToricError):
    pass


# polytope
class InvalidSpec(ToricError):
    pass


class NotSmooth(ToricError):
    pass


class EmptyPolytope(ToricError):
    pass


class UnboundedEdge(ToricError):
    pass


class NoPath(ToricError):
    pass


class NotMonotone(ToricError):
    pass


# eqring
class MixedContext(ToricError):
    pass


class ExpressionSyntaxError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariable(InputError):
    pass


# presentation
class NotABasis(ToricError):
    pass


class NotIntegral(ToricError):
    pass


# operators
class NeighbourDirection(ToricError):
    pass


class ContainsXVariables(ToricError):
    pass


class BasisMismatch(ToricError):
    pass


class NotDivisible(ToricError):
    pass


class DocumentError(InputError):
    pass


# cli
class UsageError(InputError):
    pass
