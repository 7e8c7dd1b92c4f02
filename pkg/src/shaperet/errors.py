"""Exception types raised across the pipeline."""


class ShapeRetError(ValueError):
    """Base class for all recoverable pipeline errors."""

    kind = "error"


# netpbm decoding
class UnknownMagicError(ShapeRetError):
    kind = "UnknownMagic"


class TruncatedDataError(ShapeRetError):
    kind = "TruncatedData"


class MaxvalOutOfRangeError(ShapeRetError):
    kind = "MaxvalOutOfRange"


class NonNumericTokenError(ShapeRetError):
    kind = "NonNumericToken"


class SampleOutOfRangeError(ShapeRetError):
    kind = "SampleOutOfRange"


# segmentation / masks
class ConstantImageError(ShapeRetError):
    kind = "ConstantImage"


class EmptyMaskError(ShapeRetError):
    kind = "EmptyMask"


# descriptor
class CentroidOutOfGridError(ShapeRetError):
    kind = "CentroidOutOfGrid"


class TooFewRingsError(ShapeRetError):
    kind = "TooFewRings"


class AllZeroCountsError(ShapeRetError):
    kind = "AllZeroCounts"


# retrieval
class LengthMismatchError(ShapeRetError):
    kind = "LengthMismatch"


class ZeroVectorError(ShapeRetError):
    kind = "ZeroVector"


class ModeMismatchError(ShapeRetError):
    kind = "ModeMismatch"


class BadHeaderError(ShapeRetError):
    kind = "BadHeader"


class DuplicateIdError(ShapeRetError):
    kind = "DuplicateId"


class RaggedRowError(ShapeRetError):
    kind = "RaggedRow"


# evaluation
class NoRelevantInDbError(ShapeRetError):
    kind = "NoRelevantInDb"


class EmptyResultSetError(ShapeRetError):
    kind = "EmptyResultSet"


class UndefinedBranchError(ShapeRetError):
    kind = "UndefinedBranch"


class UnknownLabelError(ShapeRetError):
    kind = "UnknownLabel"


class CanvasTooSmallError(ShapeRetError):
    kind = "CanvasTooSmall"
