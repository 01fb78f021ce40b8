"""Estimate the pixel width of a baseline JPEG from its MCU stream.

The pipeline: parse the marker segments (dimensions optional and ignored),
decode the entropy-coded scan into the ordered MCU sequence, then vote over
candidate widths derived from the most similar vertical MCU pairs.
"""

from .decoder import (
    McuEdgeProfile,
    McuSequence,
    decode_mcu_grids,
    decode_mcus,
    reconstruct_image,
    ycbcr_to_rgb,
)
from .encoder import encode_baseline
from .errors import (
    CorruptHuffmanStream,
    DecodeWarning,
    DimensionMismatch,
    EmptyCorpus,
    EmptyScan,
    IndexOutOfRange,
    InvalidRange,
    JpegError,
    MalformedSegment,
    McuWidthError,
    MissingSOI,
    PredictorOverflow,
    UnresolvedTableReference,
    UnsupportedMarker,
    UnsupportedSampling,
    WidthNotMultipleOfK,
)
from .estimator import (
    CandidateHistogram,
    DistanceRow,
    EstimationReport,
    MinimizerSet,
    candidate_widths,
    distance_row,
    estimate_width,
    histogram_to_csv,
    minimizers,
    pairwise_distance,
    report_to_json,
)
from .evaluate import (
    EvalSummary,
    FileVerdict,
    evaluate_corpus,
    generate_synthetic_corpus,
    is_correct_estimate,
    summary_to_json,
    summary_to_table,
    width_target,
)
from .netpbm import raster_to_netpbm, read_netpbm, write_netpbm
from .stream_parser import (
    ComponentSpec,
    DecodeContext,
    HuffmanSpec,
    MarkerSegment,
    parse_stream,
    scan_segments,
    strip_dimensions,
)

__version__ = "0.1.0"


def estimate_bytes(data: bytes, max_width: int | None = None) -> EstimationReport:
    """Convenience wrapper: parse, decode and estimate in one call."""
    ctx = parse_stream(data)
    return estimate_width(decode_mcus(ctx, ctx.scan_data), max_width)


def estimate_file(path, max_width: int | None = None) -> EstimationReport:
    from pathlib import Path

    return estimate_bytes(Path(path).read_bytes(), max_width)
