"""Exception types shared across the package."""


class QhError(Exception):
    """Base class for all domain errors."""


class SelfLoopError(QhError):
    pass


class DuplicateEdgeError(QhError):
    pass


class DegreeExceededError(QhError):
    def __init__(self, vertex, degree, bound):
        super().__init__(f"vertex {vertex} has degree {degree} > bound {bound}")
        self.vertex = vertex
        self.degree = degree
        self.bound = bound


class VertexSetMismatchError(QhError):
    pass


class EmptyGraphError(QhError):
    pass


class RadiusMismatchError(QhError):
    pass


class PatternTooLargeError(QhError):
    pass


class PatternDisconnectedError(QhError):
    pass


class WeightSumError(QhError):
    pass


class TooLargeForExactError(QhError):
    pass


class InfeasibleSpecError(QhError):
    pass


class RetryExhaustedError(QhError):
    pass


class KMismatchError(QhError):
    pass


class InconsistentPartitionError(QhError):
    pass


class ImproperColoringError(QhError):
    pass


class FormatError(QhError):
    """Malformed input file or JSON document."""
