"""Exception types raised by relaychain."""


class RelayChainError(Exception):
    """Base class for all package errors."""


class InvalidParameters(RelayChainError, ValueError):
    """Channel parameters violate a model constraint."""


class NotPositiveDefinite(RelayChainError, ValueError):
    """A Cholesky pivot fell below the factorization tolerance."""


class SingularConditioningBlock(RelayChainError, ValueError):
    """The covariance block being conditioned on is not invertible."""


class DegenerateCorrelation(RelayChainError, ValueError):
    """A correlation coefficient has magnitude one where that is not allowed."""


class SingularNoiseCovariance(RelayChainError, ValueError):
    """A noise covariance determinant is numerically zero."""


class UnsupportedCorrelationStructure(RelayChainError, ValueError):
    """The concatenated scheme needs Z3 independent of Z1 and Z2."""


class EmptyGrid(RelayChainError, ValueError):
    """A search grid specification has no valid points."""


class FactorizationFailure(RelayChainError, ValueError):
    """A covariance could not be square-rooted for sampling."""


class SingularSampleCovariance(RelayChainError, ValueError):
    """A sample covariance block is numerically singular."""
