"""Exception types shared across the package."""


class DeltalapError(Exception):
    """Base class for package errors."""


class DomainError(DeltalapError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class GridMismatchError(DeltalapError, ValueError):
    """Two fields that must share a grid do not."""


class PoleError(DeltalapError, ValueError):
    """Spectral parameter too close to a resolvent pole."""


class MembershipError(DeltalapError, ValueError):
    """Decomposition does not satisfy the operator-domain constraint."""


class NonContractionError(DeltalapError, RuntimeError):
    """Fixed-point iteration stopped contracting."""


class ToleranceNotMetError(DeltalapError, RuntimeError):
    """Iteration exhausted its budget before reaching tolerance."""


class ConfigError(DeltalapError, ValueError):
    """Invalid run configuration."""
