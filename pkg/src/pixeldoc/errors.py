"""Exception hierarchy shared across the toolkit.

Exit-code mapping for the CLI: config problems exit 2, data problems exit 3,
numeric failures exit 4.
"""


class PixeldocError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ConfigInvalid(PixeldocError):
    """A run config failed validation; message carries the offending key path."""

    exit_code = 2


class UsageError(PixeldocError):
    """An operation was called with arguments violating its preconditions."""

    exit_code = 2


class DataError(PixeldocError):
    """Input data is missing or malformed."""

    exit_code = 3


class EmptyCorpus(DataError):
    """The paragraph source yielded no usable paragraph."""


class FontResolution(DataError):
    """A sampled font family is not present in the registry."""


class DegenerateRegion(DataError):
    """A page region has zero area."""


class NoInk(DataError):
    """A page contains no ink to segment."""


class MissingTruth(DataError):
    """A geometric transform needs ground-truth geometry the scan lacks."""


class NoTruth(DataError):
    """The ground-truth OCR engine was given a scan without truth metadata."""


class LengthMismatch(DataError):
    """Two aligned sequences have different lengths."""


class OneClassOnly(DataError):
    """Balancing needs at least one instance of each class."""


class EmptyIndex(DataError):
    """Query against an index with no vectors."""


class NumericError(PixeldocError):
    """Numeric failure during model execution."""

    exit_code = 4


class ShapeMismatch(NumericError):
    """Tensor or image shapes do not line up."""


class AllMasked(NumericError):
    """Every patch is masked, leaving the encoder without input."""


class NonFiniteLoss(NumericError):
    """A training step produced NaN or infinity."""


class HeadMissing(NumericError):
    """Model params lack the requested task head."""
