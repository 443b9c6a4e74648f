"""Exception types shared across the package.

Everything derives from CubicPointsError; ContractViolation marks a caller
bug (broken precondition) as opposed to an honest mathematical failure mode.
"""


class CubicPointsError(Exception):
    pass


class ContractViolation(CubicPointsError):
    """A documented precondition was violated by the caller."""


# field tower / polynomial layer
class NotMonic(ContractViolation):
    pass


class ReducibleDefiningPolynomial(CubicPointsError):
    pass


class UnsupportedLevel(CubicPointsError):
    """Factorization (or splitting) is not offered at this level/degree."""


class InseparableLevel(CubicPointsError):
    pass


# projective geometry layer
class InseparablePoint(CubicPointsError):
    pass


class SplittingTooLarge(CubicPointsError):
    pass


class MixedAmbient(ContractViolation):
    pass


class DegreeDivisibleBy3(ContractViolation):
    pass


class WrongDegree(ContractViolation):
    pass


# Cremona / rational-curve layer
class NotLGP(CubicPointsError):
    pass


class IndeterminacyLocus(CubicPointsError):
    pass


class LineMeetsFundamentalLocus(CubicPointsError):
    pass


class GenericallyNotLGP(CubicPointsError):
    pass


# hypersurface layer
class DimensionMismatch(ContractViolation):
    pass


class NotOnHypersurface(ContractViolation):
    pass


class UnsupportedGroundField(CubicPointsError):
    pass


class HyperplaneContainsCurve(CubicPointsError):
    pass


class CurveContained(CubicPointsError):
    pass


class PointNotInCycle(CubicPointsError):
    pass


class Unresolved(CubicPointsError):
    """Degree descent hit a configuration the construction does not resolve.

    Carries a diagnostics dict describing the offending instance.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


# curve-family layer
class NotGeneral(CubicPointsError):
    pass


class WrongDimension(ContractViolation):
    pass


class DependentBasis(CubicPointsError):
    pass


class ScalingFailure(CubicPointsError):
    pass


# symmetric-product layer
class Undetermined(CubicPointsError):
    pass


# experiment harness
class BudgetExceeded(ContractViolation):
    pass


class NoneFound(CubicPointsError):
    pass
