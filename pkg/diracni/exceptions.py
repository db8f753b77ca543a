class DiracNIError(Exception):
    """Base class for numerical failures of the library."""


class JetOrderError(DiracNIError):
    pass


class UnsupportedPrimitive(DiracNIError):
    pass


class SingularPoint(DiracNIError):
    pass


class StepUnderflow(DiracNIError):
    pass


class NoBoundState(DiracNIError):
    pass


class CriticalCharge(DiracNIError):
    pass


class QuadratureNotConverged(DiracNIError):
    def __init__(self, message, tail=None):
        super().__init__(message)
        self.tail = tail


class NodeCountMismatch(DiracNIError):
    pass
