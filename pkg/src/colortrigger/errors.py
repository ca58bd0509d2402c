"""Exception types shared across the package."""


class ColorTriggerError(Exception):
    """Base class for all package-specific failures."""


class ZeroVector(ColorTriggerError):
    """A feature vector has (near-)zero norm and cannot be normalized.

    A blank descriptor is upstream data corruption; substituting a default
    direction would silently poison the affinity structure, so we refuse.
    """


class NonMonotonicTimestep(ColorTriggerError):
    """Frames arrived out of temporal order (or with a duplicate timestep)."""


class InfeasibleBudget(ColorTriggerError):
    """A requested weight mass lies outside [0, n] for an n-dimensional problem."""


class FeatureFileError(ColorTriggerError):
    """Base class for feature-file parsing failures."""


class BadMagic(FeatureFileError):
    """File does not start with the expected magic bytes."""


class VersionMismatch(FeatureFileError):
    """File declares an unsupported format version."""


class TruncatedFile(FeatureFileError):
    """File is structurally broken: wrong length, or a row/line cut short."""


class DimensionMismatch(FeatureFileError):
    """Feature dimension is inconsistent within one stream."""
