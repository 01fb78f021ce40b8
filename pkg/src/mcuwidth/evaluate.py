"""Corpus-level evaluation of the width estimator.

Ground truth comes from each file's intact frame header; the estimate is
judged correct when it equals the true width rounded up to the next MCU
multiple (decoded rasters are always MCU-aligned, so that is the best any
estimator can do).  A synthetic corpus generator provides desk-scale
stand-ins for the public datasets: smooth gradient images the method should
get right, and vertically periodic striped images it is expected to fail on.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .decoder import decode_mcus
from .encoder import encode_baseline
from .errors import EmptyCorpus, InvalidRange, McuWidthError
from .estimator import estimate_width
from .stream_parser import parse_stream, strip_dimensions


def is_correct_estimate(w_est: int, w_true: int, mcu_width: int) -> bool:
    """Accept w_est iff it is the true width rounded up to a multiple of K."""
    if w_est <= 0 or w_true <= 0:
        raise ValueError("widths must be positive")
    if mcu_width not in (8, 16):
        raise ValueError(f"MCU width must be 8 or 16, got {mcu_width}")
    return w_est == width_target(w_true, mcu_width)


def width_target(w_true: int, mcu_width: int) -> int:
    """The unique multiple of K in [w_true, w_true + K - 1]."""
    return -(-w_true // mcu_width) * mcu_width


@dataclass(frozen=True)
class FileVerdict:
    path: str
    w_true: int
    mcu_width: int
    w_estimated: int | None
    target: int
    correct: bool
    tie_broken: bool
    error: str | None = None


@dataclass(frozen=True)
class EvalSummary:
    total: int            # N: files attempted
    correct: int          # M: files whose estimate hit the target
    accuracy: float       # M / N
    verdicts: list[FileVerdict]


def evaluate_corpus(paths, strip: bool = False,
                    max_width: int | None = None) -> EvalSummary:
    """Estimate widths for every file and score them against their headers.

    With ``strip`` the SOF dimensions are zeroed before the estimation
    pipeline runs, proving the estimate never reads them.  Per-file failures
    (parse or decode errors) become incorrect verdicts instead of aborting.
    """
    paths = sorted(str(p) for p in paths)
    if not paths:
        raise EmptyCorpus("no files to evaluate")
    verdicts = []
    for path in paths:
        w_true = 0
        k_px = 0
        try:
            data = Path(path).read_bytes()
            ctx = parse_stream(data)
            if ctx.declared_width is None:
                raise McuWidthError("header carries no width; no ground truth")
            w_true = ctx.declared_width
            k_px = ctx.mcu_width
            if strip:
                ctx = parse_stream(strip_dimensions(data))
            report = estimate_width(decode_mcus(ctx, ctx.scan_data), max_width)
            target = width_target(w_true, k_px)
            verdicts.append(FileVerdict(
                path=path, w_true=w_true, mcu_width=k_px,
                w_estimated=report.estimated_width, target=target,
                correct=report.estimated_width == target,
                tie_broken=report.tie_broken))
        except (McuWidthError, OSError) as exc:
            target = width_target(w_true, k_px) if w_true and k_px else 0
            verdicts.append(FileVerdict(
                path=path, w_true=w_true, mcu_width=k_px,
                w_estimated=None, target=target, correct=False,
                tie_broken=False, error=str(exc)))
    n = len(verdicts)
    m = sum(1 for v in verdicts if v.correct)
    return EvalSummary(total=n, correct=m, accuracy=m / n, verdicts=verdicts)


def summary_to_json(summary: EvalSummary) -> str:
    payload = {
        "N": summary.total,
        "M": summary.correct,
        "acc": summary.accuracy,
        "verdicts": [
            {
                "path": v.path,
                "w_true": v.w_true,
                "K": v.mcu_width,
                "w_estimated": v.w_estimated,
                "target": v.target,
                "correct": v.correct,
                "tie_broken": v.tie_broken,
                "error": v.error,
            }
            for v in summary.verdicts
        ],
    }
    return json.dumps(payload, indent=2)


def summary_to_table(summary: EvalSummary) -> str:
    lines = [f"{'file':<44} {'true':>5} {'est':>5} {'target':>6} verdict"]
    for v in summary.verdicts:
        est = "-" if v.w_estimated is None else str(v.w_estimated)
        verdict = "ok" if v.correct else ("error" if v.error else "WRONG")
        lines.append(f"{os.path.basename(v.path):<44} {v.w_true:>5} "
                     f"{est:>5} {v.target:>6} {verdict}")
    lines.append("")
    lines.append(f"{'N':>6} {'M':>6} {'acc(%)':>8}")
    lines.append(f"{summary.total:>6} {summary.correct:>6} "
                 f"{100.0 * summary.accuracy:>8.2f}")
    return "\n".join(lines) + "\n"


def _smooth_image(rng: np.random.Generator, width: int, height: int,
                  color: bool) -> np.ndarray:
    """Photo-like content: a monotone vertical ramp, horizontal waves and a
    little bounded noise.  Vertical monotonicity keeps distant rows from
    ever matching better than true vertical neighbors."""
    y = np.arange(height, dtype=np.float64)[:, None]
    x = np.arange(width, dtype=np.float64)[None, :]
    low = rng.uniform(18.0, 48.0)
    span = rng.uniform(120.0, 190.0)
    ramp = low + span * (y / max(height - 1, 1))
    waves = (rng.uniform(10.0, 28.0)
             * np.sin(2.0 * np.pi * x / rng.uniform(90.0, 320.0)
                      + rng.uniform(0.0, 2.0 * np.pi)))
    slow = (rng.uniform(4.0, 9.0)
            * np.sin(2.0 * np.pi * y / (rng.uniform(2.2, 4.0) * height)
                     + rng.uniform(0.0, 2.0 * np.pi)))
    base = ramp + waves + slow
    if color:
        img = np.empty((height, width, 3), dtype=np.float64)
        for ch in range(3):
            tint = (rng.uniform(-18.0, 18.0)
                    * np.sin(2.0 * np.pi * x / rng.uniform(150.0, 400.0)
                             + rng.uniform(0.0, 2.0 * np.pi)))
            img[..., ch] = base + rng.uniform(-12.0, 12.0) + tint
        noise = rng.integers(-2, 3, size=img.shape)
    else:
        img = base
        noise = rng.integers(-2, 3, size=img.shape)
    return np.clip(np.floor(img + noise + 0.5), 2, 253).astype(np.uint8)


def _periodic_image(rng: np.random.Generator, width: int, height: int) -> np.ndarray:
    """Horizontal stripes whose vertical period divides the block size, the
    texture class the voting scheme is known to get wrong."""
    period = int(rng.choice([4, 8, 16]))
    dark = int(rng.integers(40, 90))
    light = int(rng.integers(160, 215))
    y = np.arange(height)
    stripe = np.where((y // (period // 2)) % 2 == 0, dark, light)
    return np.repeat(stripe[:, None], width, axis=1).astype(np.uint8)


def generate_synthetic_corpus(out_dir, count: int,
                              width_range: tuple[int, int] = (174, 500),
                              seed: int = 0,
                              periodic: bool = False) -> list[Path]:
    """Write ``count`` deterministic JPEGs with known headers into ``out_dir``.

    Smooth files cycle through grayscale, 4:2:0, 4:4:4 and 4:2:2 encodings;
    periodic files are grayscale stripes tagged ``periodic_`` in the name.
    The same seed always produces byte-identical files.
    """
    if count < 1:
        raise InvalidRange(f"count must be >= 1, got {count}")
    lo, hi = width_range
    if lo < 16 or hi < lo:
        raise InvalidRange(f"bad width range [{lo}, {hi}]")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    flavors = ("4:2:0", None, "4:4:4", "4:2:0", "4:2:2")  # None = grayscale
    paths = []
    for idx in range(count):
        width = int(rng.integers(lo, hi + 1))
        height = int(rng.integers(96, 289))
        quality = int(rng.integers(86, 95))
        if periodic:
            image = _periodic_image(rng, width, height)
            data = encode_baseline(image, quality=quality)
            name = f"periodic_{idx:03d}_w{width}_h{height}.jpg"
        else:
            flavor = flavors[idx % len(flavors)]
            color = flavor is not None
            image = _smooth_image(rng, width, height, color)
            restart = int(rng.integers(0, 2)) * int(rng.integers(2, 9))
            if color:
                data = encode_baseline(image, quality=quality, subsampling=flavor,
                                       restart_interval=restart)
                tag = flavor.replace(":", "")
            else:
                data = encode_baseline(image, quality=quality,
                                       restart_interval=restart)
                tag = "gray"
            name = f"smooth_{idx:03d}_w{width}_h{height}_{tag}.jpg"
        path = out_dir / name
        path.write_bytes(data)
        paths.append(path)
    return paths
