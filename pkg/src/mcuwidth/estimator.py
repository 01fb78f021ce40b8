"""Width estimation by voting over vertically-adjacent MCU pair candidates.

For every MCU i the estimator measures how well each later MCU j would sit
directly below it: the mean Euclidean distance between i's bottom pixel row
and j's top pixel row.  The j's at the exact minimum are the most plausible
vertical neighbors, and each contributes the candidate width (j - i) * K.
The most frequent candidate across all i wins.

Distances are accumulated in float64 with a fixed order (components
ascending inside each pixel, pixels left to right), so results are
bit-for-bit reproducible and match a naive reference evaluation exactly.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

import numpy as np

from .decoder import McuSequence
from .errors import DimensionMismatch, EmptyScan, IndexOutOfRange


def _edge_distances(bottom: np.ndarray, tops: np.ndarray) -> np.ndarray:
    """Mean per-pixel Euclidean distance from one bottom row to many top rows.

    ``bottom`` has shape (K, C); ``tops`` has shape (m, K, C).  Returns shape
    (m,).  Additions are explicitly ordered (c then k ascending) so the
    result is reproducible down to the last bit.
    """
    diff = tops - bottom
    d0 = diff[..., 0]
    sq = d0 * d0
    for c in range(1, diff.shape[-1]):
        dc = diff[..., c]
        sq = sq + dc * dc
    per_pixel = np.sqrt(sq)
    acc = per_pixel[..., 0]
    for k in range(1, per_pixel.shape[-1]):
        acc = acc + per_pixel[..., k]
    return acc / per_pixel.shape[-1]


def pairwise_distance(bottom_row: np.ndarray, top_row: np.ndarray) -> float:
    """Distance between one MCU's bottom row and another's top row.

    Both rows are (K, C) arrays of component samples.  Returns the mean over
    the K pixel positions of the per-pixel Euclidean distance across the C
    components; zero iff the rows are identical.
    """
    b = np.asarray(bottom_row, dtype=np.float64)
    t = np.asarray(top_row, dtype=np.float64)
    if b.ndim != 2 or b.shape != t.shape:
        raise DimensionMismatch(
            f"edge rows must share one (K, C) shape, got {b.shape} vs {t.shape}")
    return float(_edge_distances(b, t[np.newaxis])[0])


@dataclass(frozen=True)
class DistanceRow:
    """Distances from MCU i's bottom row to the top rows of all later MCUs."""

    i: int                   # 1-based
    values: np.ndarray       # (n - i,) float64; entry m is the distance to MCU i+1+m


@dataclass(frozen=True)
class MinimizerSet:
    """The 1-based indices j > i whose top row is exactly nearest to MCU i."""

    i: int
    indices: frozenset[int]


@dataclass(frozen=True)
class CandidateHistogram:
    """Vote counts per candidate width, widths ascending."""

    widths: np.ndarray       # int64, distinct positive multiples of K
    freqs: np.ndarray        # int64, aligned with widths, all positive

    @property
    def total_votes(self) -> int:
        return int(self.freqs.sum())


@dataclass(frozen=True)
class EstimationReport:
    estimated_width: int
    mode_frequency: int
    n: int
    mcu_width: int
    histogram: CandidateHistogram
    tie_broken: bool
    elapsed: float           # seconds


def distance_row(seq: McuSequence, i: int) -> DistanceRow:
    """Distances d_i(i+1) .. d_in for 1 <= i < n."""
    n = seq.n
    if not 1 <= i < n:
        raise IndexOutOfRange(f"i={i} must satisfy 1 <= i < n={n}")
    bottom = seq.bottoms[i - 1].astype(np.float64)
    tops = seq.tops[i:].astype(np.float64)
    return DistanceRow(i, _edge_distances(bottom, tops))


def minimizers(row: DistanceRow) -> MinimizerSet:
    """Every j attaining the exact (bitwise float) minimum of the row."""
    values = row.values
    if len(values) == 0:
        raise IndexOutOfRange(f"distance row {row.i} is empty")
    lowest = values.min()
    hits = np.nonzero(values == lowest)[0]
    return MinimizerSet(row.i, frozenset(int(row.i + 1 + m) for m in hits))


def candidate_widths(minimizer_set: MinimizerSet, mcu_width: int) -> set[int]:
    """Widths implied by treating each minimizer as the vertical neighbor."""
    i = minimizer_set.i
    return {(j - i) * mcu_width for j in minimizer_set.indices}


def estimate_width(seq: McuSequence, max_width: int | None = None) -> EstimationReport:
    """Run the full voting pipeline over an MCU sequence.

    For each i in 1..n-1, the exact minimizers of the distance row vote for
    their widths (j - i) * K; the most frequent width wins.  A frequency tie
    resolves to the smallest tied width and is flagged.  ``max_width``, when
    given, caps the candidate search at j - i <= max_width // K.
    """
    started = time.perf_counter()
    n = seq.n
    if n < 2:
        raise EmptyScan(f"need at least 2 MCUs to estimate a width, have {n}")
    k_px = seq.mcu_width

    cap = n - 1
    if max_width is not None:
        cap = max_width // k_px
        if cap < 1:
            raise ValueError(f"max_width {max_width} is below one MCU width {k_px}")

    tops = seq.tops.astype(np.float64)
    bottoms = seq.bottoms.astype(np.float64)

    counts = np.zeros(n, dtype=np.int64)   # index = lag j - i
    for i in range(1, n):
        span = min(n - i, cap)
        dist = _edge_distances(bottoms[i - 1], tops[i:i + span])
        lowest = dist.min()
        hits = np.nonzero(dist == lowest)[0]
        counts[hits + 1] += 1

    mode_freq = int(counts.max())
    tied = np.nonzero(counts == mode_freq)[0]
    estimated = int(tied[0]) * k_px
    nonzero = np.nonzero(counts)[0]
    histogram = CandidateHistogram(
        widths=nonzero.astype(np.int64) * k_px,
        freqs=counts[nonzero].copy(),
    )
    return EstimationReport(
        estimated_width=estimated,
        mode_frequency=mode_freq,
        n=n,
        mcu_width=k_px,
        histogram=histogram,
        tie_broken=len(tied) > 1,
        elapsed=time.perf_counter() - started,
    )


def histogram_to_csv(histogram: CandidateHistogram, n: int, mcu_width: int) -> str:
    """CSV export: raw frequencies plus a positional-opportunity-normalized
    column (a width m*K can occur at most n-m times)."""
    lines = ["width,frequency,normalized_frequency"]
    for width, freq in zip(histogram.widths, histogram.freqs):
        m = int(width) // mcu_width
        lines.append(f"{int(width)},{int(freq)},{int(freq) / (n - m):.6f}")
    return "\n".join(lines) + "\n"


def report_to_json(report: EstimationReport) -> str:
    payload = {
        "estimated_width": report.estimated_width,
        "mode_frequency": report.mode_frequency,
        "n": report.n,
        "K": report.mcu_width,
        "tie_broken": report.tie_broken,
        "elapsed_ms": report.elapsed * 1000.0,
        "histogram": [
            {"width": int(w), "frequency": int(f)}
            for w, f in zip(report.histogram.widths, report.histogram.freqs)
        ],
    }
    return json.dumps(payload, indent=2)
