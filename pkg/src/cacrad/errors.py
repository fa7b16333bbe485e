"""Exception taxonomy for the pipeline.

Three broad categories drive CLI exit codes: configuration problems,
data problems (unreadable/inconsistent inputs), and degenerate cohorts
(inputs that are readable but statistically unusable).
"""


class CacradError(Exception):
    """Base class for all library errors."""


class ConfigError(CacradError):
    """Bad configuration value or key."""


class DataError(CacradError):
    """Unreadable, malformed, or inconsistent input data."""


class DegenerateCohortError(CacradError):
    """Cohort too small or single-class after exclusions."""


# --- volume I/O -------------------------------------------------------------

class BadMagic(DataError):
    """File is not a NIfTI-1 single file."""


class UnsupportedDatatype(DataError):
    """Voxel datatype or data layout this reader does not handle."""


class TruncatedFile(DataError):
    """File ends before the declared header or voxel data."""


class NonPositiveSpacing(DataError):
    """Header carries a zero or negative voxel spacing."""


class IoFailure(DataError):
    """Underlying OS-level read/write failure."""


class DuplicateSubject(DataError):
    """Subject id appears more than once."""


class MissingFile(DataError):
    """Referenced volume or mask path does not exist."""


class BadLabel(DataError):
    """Unparseable contrast tag or calcium score."""


# --- preprocessing ----------------------------------------------------------

class DimMismatch(DataError):
    """Volume and mask grids differ."""


class EmptyRoi(DataError):
    """Mask selects no voxels."""


class NonPositiveWidth(ConfigError):
    """Discretization bin width must be > 0."""


class BadRange(ConfigError):
    """Clip range with lo >= hi."""


class BadSpacing(ConfigError):
    """Resampling target spacing must be > 0."""


# --- features ---------------------------------------------------------------

class EmptyMask(DataError):
    """Mask has no true voxels; subject should be excluded."""


# --- selection / tables -----------------------------------------------------

class TooFewRows(DegenerateCohortError):
    """Operation needs at least two rows."""


class UnknownColumn(DataError):
    """Referenced feature column is not in the table."""


# --- learning ---------------------------------------------------------------

class SingleClass(DegenerateCohortError):
    """Training data contains only one class where two are required."""


class TooFewPerClass(DegenerateCohortError):
    """Not enough members of some class for the requested fold count."""


class NonFiniteFeature(DataError):
    """NaN or infinity in a feature matrix."""


class SchemaMismatch(DataError):
    """Prediction-time columns differ from the training schema."""


# --- evaluation -------------------------------------------------------------

class EmptyCounts(DataError):
    """Confusion counts sum to zero."""


class LengthMismatch(DataError):
    """Paired metric lists have different lengths."""


class TooFewPairs(DegenerateCohortError):
    """Paired test needs at least two pairs."""


# --- embeddings -------------------------------------------------------------

class RaggedRow(DataError):
    """Embedding row width differs from the first row."""


class NonFiniteValue(DataError):
    """Non-finite value in an embedding file."""
