"""Exception types raised across the package.

Everything derives from BlockveilError so callers (and the CLI) can catch
one base class and map conditions to exit codes.
"""


class BlockveilError(Exception):
    """Base class for all blockveil errors."""


class DimensionError(BlockveilError):
    """Image dimensions incompatible with the requested block size, or not RGB."""


class CountMismatch(BlockveilError):
    """Block count does not match the target grid."""


class LengthMismatch(BlockveilError):
    """A mask or slot sequence has the wrong length."""


class NotAPermutation(BlockveilError):
    """A supposed permutation is not a bijection on its index range."""


class NotSquare(BlockveilError):
    """The grid scrambler needs a square image."""


class BadLength(BlockveilError):
    """A binary dataset file is not a whole number of records."""


class BadLabel(BlockveilError):
    """A record label is outside the class range."""


class BadDims(BlockveilError):
    """Dataset images have dimensions the writer does not accept."""


class DimsMismatch(BlockveilError):
    """Images in a grid export do not share dimensions."""


class EmptyHistogram(BlockveilError):
    """Entropy of a histogram with zero total count is undefined."""


class TooSmall(BlockveilError):
    """Image too small along the requested correlation direction."""


class EmptyBatch(BlockveilError):
    """Loss/gradient requested for an empty batch."""


class EmptyDataset(BlockveilError):
    """Training or evaluation requested on an empty dataset."""


class KeyFormatError(BlockveilError):
    """A key file is malformed or carries out-of-range values."""


class SchemeMismatch(BlockveilError):
    """The key file's scheme differs from the one requested."""
