"""Demonstrate the known failure class: vertically periodic textures.

Usage: python demos/05_failure_modes.py
When image content repeats every few rows, MCUs in the same stripe phase
become interchangeable: the bottom row of almost any MCU matches the top
row of its immediate successor in the stream, so votes flood the smallest
candidate widths and the mode collapses to K instead of the true width.
"""

import tempfile
from pathlib import Path

import numpy as np

import mcuwidth as mw

with tempfile.TemporaryDirectory() as tmp:
    paths = mw.generate_synthetic_corpus(Path(tmp), 6, width_range=(200, 480),
                                         seed=99, periodic=True)
    print(f"{'file':<34} {'true':>5} {'target':>6} {'estimate':>8}  top votes")
    for path in paths:
        data = path.read_bytes()
        ctx = mw.parse_stream(data)
        report = mw.estimate_bytes(data)
        target = mw.width_target(ctx.declared_width, ctx.mcu_width)
        hist = report.histogram
        top = np.argsort(hist.freqs)[::-1][:3]
        votes = ", ".join(f"{int(hist.widths[i])}px x{int(hist.freqs[i])}"
                          for i in top)
        print(f"{path.name:<34} {ctx.declared_width:>5} {target:>6} "
              f"{report.estimated_width:>8}  {votes}")

    print("\nEvery estimate lands on a small divisor-related width, not the "
          "true one: exact ties between same-phase MCUs outvote the true "
          "vertical neighbors.")
