"""Walk the full pipeline on one file: parse, decode, vote, report.

Usage: python demos/01_estimate_width.py [path/to/image.jpg]
Defaults to the 375-wide fixture whose decoded stream holds 768 MCUs.
"""

import sys
from pathlib import Path

import mcuwidth as mw

path = Path(sys.argv[1]) if len(sys.argv) > 1 else (
    Path(__file__).parent.parent / "tests" / "fixtures" / "worked_375x500_420.jpg")
data = path.read_bytes()

# Step 0: the marker-level parse. The declared dimensions are just metadata
# here; nothing downstream reads them.
ctx = mw.parse_stream(data)
print(f"file:             {path.name}")
print(f"declared size:    {ctx.declared_width} x {ctx.declared_height} "
      "(ignored by the estimator)")
print(f"components:       {ctx.component_count}, MCU width K = {ctx.mcu_width}")
print(f"restart interval: {ctx.restart_interval or 'none'}")

# Step 1: decode the entropy stream into the ordered MCU sequence. Only the
# top and bottom pixel rows of each MCU are kept.
seq = mw.decode_mcus(ctx, ctx.scan_data)
print(f"decoded MCUs:     n = {seq.n}")

# Step 2: vote. For every MCU i, the nearest later top row(s) propose the
# width (j - i) * K; the most frequent proposal wins.
report = mw.estimate_width(seq)
print(f"estimated width:  {report.estimated_width} px "
      f"(mode frequency {report.mode_frequency} of {report.histogram.total_votes} votes)")
if ctx.declared_width:
    target = mw.width_target(ctx.declared_width, ctx.mcu_width)
    verdict = "correct" if report.estimated_width == target else "WRONG"
    print(f"target (true width rounded up to K): {target} -> {verdict}")
print(f"elapsed:          {report.elapsed * 1000:.0f} ms")
