"""Exception hierarchy shared by every module of the toolkit."""


class VSLError(Exception):
    """Base class for all toolkit errors."""


class SingularMatrix(VSLError):
    pass


class DomainError(VSLError):
    pass


class DimensionMismatch(VSLError, ValueError):
    pass


class ClusterAmbiguity(VSLError):
    """Two clusters of cos^2 values are too close to be told apart."""


class StepFailure(VSLError):
    pass


class NearExceptionalSet(VSLError):
    """The unperturbed Wronskian is (numerically) singular at the requested point."""


class ContourTooClose(VSLError):
    """A zero of det W lies on or very close to the contour."""


class UnresolvedCluster(VSLError):
    pass


class RankMismatch(VSLError):
    pass


class DegenerateZ(VSLError):
    pass


class NearPole(VSLError):
    pass


class ConfigError(VSLError):
    pass
