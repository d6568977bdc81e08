"""Exception hierarchy shared by all mslab modules."""


class MslabError(Exception):
    """Base class for every error raised by mslab."""


class IntegrationError(MslabError, ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    The last two estimates are kept on the instance so callers can decide
    whether the partial answer is still useful.
    """

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class TailDominationError(IntegrationError):
    """A real-line integrand decays too slowly for the tangent substitution."""


class SingularGramError(MslabError, ArithmeticError):
    """A Gram matrix is numerically singular (pivot below threshold)."""


class EvaluationError(MslabError, ValueError):
    """A closed-form evaluation hit a pole or left its domain."""


class SingularityError(EvaluationError):
    """Evaluation at the boundary singularity of a singular inner function."""


class DegenerateSequenceError(MslabError, ValueError):
    """A point sequence has coincident points."""


class BoundaryDegenerateError(MslabError, ValueError):
    """|I(a)| is too close to 1 for a model-space estimate."""


class PreconditionError(MslabError, ValueError):
    """An operation was called outside its stated preconditions."""


class InterpolationConsistencyError(MslabError, AssertionError):
    """The constructed interpolant misses its targets beyond tolerance."""
