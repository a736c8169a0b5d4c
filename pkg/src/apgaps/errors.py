"""Exception types shared across the package."""


class ApgapsError(Exception):
    """Base class for every error raised by this package."""


class NotInvertibleError(ApgapsError):
    """Modular inverse requested for a non-coprime pair."""


class DomainError(ApgapsError):
    """Argument outside the mathematical domain of a function."""


class InvalidProgressionError(ApgapsError):
    """Progression parameters violate gcd(q, r) = 1 or 1 <= r <= q."""


class OutOfScanRangeError(ApgapsError):
    """Query point lies beyond the scanned range of a record set."""


class IncompleteEnsembleError(ApgapsError):
    """Operation requires ensembles covering every admissible residue."""


class EmptyInputError(ApgapsError):
    """Empty data where at least one value is required."""


class DegenerateInputError(ApgapsError):
    """Data without enough variation for the requested statistic."""


class NonPositiveValueError(ApgapsError):
    """Positive values required (log-log fitting)."""


class InsufficientPointsError(ApgapsError):
    """Too few usable points to determine the fit parameters."""


class SingularSystemError(ApgapsError):
    """Normal equations of a fit are singular."""


class SchemaError(ApgapsError):
    """Cache file declares an unsupported schema version."""


class CorruptCacheError(ApgapsError):
    """Cache file is unreadable or violates a structural invariant."""


class CacheIOError(ApgapsError):
    """Cache file could not be read or written."""
