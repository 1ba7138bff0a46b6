"""Exception types shared across the package."""


class BezierMaskError(Exception):
    """Base class for all package-specific errors."""


class PgmFormatError(BezierMaskError):
    """Malformed or unsupported PGM data."""


class ContourFormatError(BezierMaskError):
    """Contour JSON violates the schema or the closure invariant."""


class EmptyMaskError(BezierMaskError):
    """Operation requires at least one foreground pixel."""


class DegenerateShapeError(BezierMaskError):
    """Object too small or malformed for the requested operation."""


class UndefinedMetricError(BezierMaskError):
    """Metric is undefined for the given inputs (e.g. empty point set)."""
