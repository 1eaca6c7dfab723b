"""Exception types shared across the package."""
from __future__ import annotations

__all__ = [
    "StripTRError",
    "MalformedSeriesError",
    "PoleError",
    "GeometryError",
    "DegenerateGeometryError",
    "PrecisionError",
    "BudgetError",
    "AmbiguityError",
    "ConfigError",
    "VerificationError",
]


class StripTRError(Exception):
    """Base class for all package errors."""


class MalformedSeriesError(StripTRError):
    """A series operation was called with violated preconditions."""


class PoleError(StripTRError):
    """Evaluation requested at a pole or excluded point."""


class GeometryError(StripTRError):
    """An operation received a geometry that fails validation."""


class DegenerateGeometryError(GeometryError):
    """Ramification or residue points collide / are non-simple."""


class PrecisionError(StripTRError):
    """A numeric routine could not certify the requested precision."""


class BudgetError(StripTRError):
    """A recursion exceeded its configured (g, n) budget."""


class AmbiguityError(StripTRError):
    """Two distinct parameter pairs normalize to the same ratio monomial."""


class ConfigError(StripTRError):
    """A run configuration file is malformed."""


class VerificationError(StripTRError):
    """A cross-route verification failed beyond tolerance."""
