"""Exception types raised across the package."""


class ArroidsError(Exception):
    """Base class for every error raised by this package."""


class TorsionQuotient(ArroidsError, ValueError):
    pass


class DimensionMismatch(ArroidsError, ValueError):
    pass


class UnknownElement(ArroidsError, KeyError):
    pass


class DegeneratePoint(ArroidsError, ValueError):
    pass


class RankError(ArroidsError, ValueError):
    """Operation called on an arroid of the wrong rank."""


class ValidationFailed(ArroidsError, ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"arroid failed validation: {report.summary()}")


class NotTransversal(ArroidsError, ValueError):
    pass


class UnknownRay(ArroidsError, KeyError):
    pass


class UnknownCone(ArroidsError, KeyError):
    pass


class NotACycle(ArroidsError, ValueError):
    pass


class InconsistentVerdict(ArroidsError, RuntimeError):
    pass


class IrrationalIntersection(ArroidsError, ValueError):
    pass


class SingularConic(ArroidsError, ValueError):
    pass


class TorsionCokernel(ArroidsError, ValueError):
    pass


class UnknownCurve(ArroidsError, KeyError):
    pass


class PreconditionFailed(ArroidsError, ValueError):
    pass
