"""Exceptions raised by germlab models."""


class GermlabError(ValueError):
    """Base class for every germlab error."""


class DegreeOverflow(GermlabError):
    """A multi-index exceeds the truncation degree of a jet."""


class ParityViolation(GermlabError):
    """An odd-degree coefficient appeared where an even germ was required."""


class SingularLinearPart(GermlabError):
    """A change of variables has a non-invertible linear part."""


class OddnessViolation(GermlabError):
    """An even jet was composed with a substitution that is not odd."""


class NotCritical(GermlabError):
    """The origin is not a critical point of the jet."""


class EvaluationFailure(GermlabError):
    """A numeric evaluator failed or returned a non-finite value."""


class InsufficientJet(GermlabError):
    """The truncation degree is too low for the requested quantity."""


class SingularBlock(GermlabError):
    """The regular Hessian block is not invertible."""


class CubicIsCube(GermlabError):
    """The cubic part of a corank-2 germ is a perfect cube."""


class CubicZero(GermlabError):
    """The cubic part of a corank-2 germ vanishes."""


class ZeroForm(GermlabError):
    """A binary form is identically zero."""


class AdaptationFailure(GermlabError):
    """A jet is not in the adapted shape an algorithm expects."""


class PreconditionViolated(GermlabError):
    """An operation was called on a jet outside its domain."""


class UnsupportedLabel(GermlabError):
    """No versality statement or versal family exists for the label."""


class UnknownLabel(GermlabError):
    """The label is not in the catalogue."""


class NotStabilized(GermlabError):
    """A local algebra dimension did not stabilize within the degree cap."""

    def __init__(self, message, basis=None) -> None:
        super().__init__(message)
        self.basis = basis


class NewtonDivergence(GermlabError):
    """Newton iteration from a seed did not converge."""


class UnresolvedCell(GermlabError):
    """A sweep cell could not be resolved at the grid resolution."""


class PairingFailure(GermlabError):
    """A non-basic critical point has no antipodal twin."""


class ExpressionSyntaxError(GermlabError):
    """Malformed expression text; `offset` is the UTF-8 byte offset of the problem."""

    def __init__(self, message, offset) -> None:
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class UnknownSymbol(ExpressionSyntaxError):
    """An identifier other than k1..k9 or l1..l9."""
