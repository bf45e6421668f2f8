class FinslerError(Exception):
    """Base class of every error raised by finslerjet."""


class JetError(FinslerError):
    pass


class SingularJetMatrixError(JetError):
    pass


class DomainError(FinslerError):
    """A point lies outside the metric domain or the metric is degenerate there."""


class ApplicabilityError(FinslerError):
    """The metric does not satisfy the precondition of an identity or a fit."""


class SpecError(FinslerError):
    pass


class QuadratureError(FinslerError):
    def __init__(self, message, estimated_error=None):
        super().__init__(message)
        self.estimated_error = estimated_error


class DetectionError(FinslerError):
    pass
