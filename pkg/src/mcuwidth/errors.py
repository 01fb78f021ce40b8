"""Exception and warning types shared across the package."""


class McuWidthError(Exception):
    """Base class for all errors raised by this package."""


class JpegError(McuWidthError):
    """A JPEG byte stream could not be parsed or decoded.

    ``offset`` is the byte position in the input where the problem was
    detected, when known.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


# -- marker/segment parsing ------------------------------------------------

class MissingSOI(JpegError):
    """Input does not begin with the 0xFFD8 start-of-image marker."""


class UnsupportedMarker(JpegError):
    """A marker outside the supported baseline-sequential subset."""


class MalformedSegment(JpegError):
    """A marker segment is structurally invalid (bad length, overrun, ...)."""


class UnresolvedTableReference(JpegError):
    """A component references a Huffman or quantization table never defined."""


class UnsupportedSampling(JpegError):
    """Component count or sampling factors outside the supported set."""


# -- entropy decoding ------------------------------------------------------

class CorruptHuffmanStream(JpegError):
    """Scan bits do not decode under the declared Huffman tables."""


class PredictorOverflow(JpegError):
    """A DC predictor left the 12-bit signed range [-2048, 2047]."""


class EmptyScan(JpegError):
    """Fewer than two complete MCUs could be decoded."""


class WidthNotMultipleOfK(McuWidthError, ValueError):
    """Requested raster width is not a positive multiple of the MCU width."""


# -- estimation ------------------------------------------------------------

class DimensionMismatch(McuWidthError, ValueError):
    """Edge rows passed to the distance kernel have incompatible shapes."""


class IndexOutOfRange(McuWidthError, IndexError):
    """MCU index outside the valid 1-based range."""


# -- evaluation ------------------------------------------------------------

class EmptyCorpus(McuWidthError, ValueError):
    """No input files were given to evaluate."""


class InvalidRange(McuWidthError, ValueError):
    """Synthetic corpus parameters are out of range."""


class DecodeWarning(UserWarning):
    """Non-fatal anomaly met while decoding (truncation, stray restart, ...)."""
