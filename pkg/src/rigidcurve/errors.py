"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class RigidCurveError(Exception):
    """Base class; ``exit_code`` is what the command line reports."""

    exit_code = 2


class ZeroInput(RigidCurveError):
    pass


class DegenerateInput(RigidCurveError):
    pass


class InfiniteIntersection(RigidCurveError):
    pass


class UnsupportedGerm(RigidCurveError):
    """Raised with the full branch data when a germ is outside the closed type list."""

    def __init__(self, message, data=None):
        super().__init__(message)
        self.data = data


class GenusMismatch(RigidCurveError):
    pass


class EliminationOverflow(RigidCurveError):
    pass


class CurveContainsTriangleLine(RigidCurveError):
    pass


class IdenticallyDegenerate(RigidCurveError):
    pass


class SingularMatrix(RigidCurveError):
    pass


class CertificationFailure(RigidCurveError):
    pass


class FlexCountUnexpected(CertificationFailure):
    pass


class ResourceBudget(RigidCurveError):
    pass


class BadResidues(RigidCurveError):
    exit_code = 3


class TypeBoundViolated(RigidCurveError):
    exit_code = 3


class UnknownFamily(RigidCurveError):
    exit_code = 3


class BadParams(RigidCurveError):
    exit_code = 3


class ParseError(RigidCurveError):
    exit_code = 3


class DescriptorMismatch(RigidCurveError):
    pass
