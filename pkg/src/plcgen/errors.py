"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class PlcError(Exception):
    """Base class for all plcgen errors."""

    exit_code = 1


class DomainError(PlcError, ValueError):
    """An argument lies outside the mathematical domain of a formula."""

    exit_code = 3


class UnsupportedClassError(DomainError):
    """The requested channel class has no model for this quantity."""


class UnsupportedClusterError(DomainError):
    """The requested cluster index is outside the tabulated range."""


class ParameterDomainError(DomainError):
    """A fitted parameter function produced an invalid value (e.g. GEV scale <= 0)."""


class DataIntegrityError(PlcError):
    """Embedded constants violate an invariant."""


class TruncationError(DomainError):
    """Rejection sampling of a truncated distribution gave up."""


class DistanceDomainError(PlcError, ValueError):
    """Propagation distance outside the range where the cable-loss fit is passive."""

    exit_code = 5


class GridError(PlcError, ValueError):
    """Frequency grid is malformed for the requested operation."""

    exit_code = 4
