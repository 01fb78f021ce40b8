"""Show the candidate-width histogram behind an estimate.

Usage: python demos/02_candidate_histogram.py [image.jpg] [out.csv]
Prints a text histogram of the strongest candidates and writes the full
CSV (width, frequency, normalized_frequency).
"""

import sys
from pathlib import Path

import numpy as np

import mcuwidth as mw

path = Path(sys.argv[1]) if len(sys.argv) > 1 else (
    Path(__file__).parent.parent / "tests" / "fixtures" / "worked_375x500_420.jpg")
out = Path(sys.argv[2]) if len(sys.argv) > 2 else Path("histogram.csv")

report = mw.estimate_file(path)
hist = report.histogram

print(f"{path.name}: n={report.n}, K={report.mcu_width}, "
      f"w*={report.estimated_width}\n")
order = np.argsort(hist.freqs)[::-1][:12]
peak = int(hist.freqs.max())
for idx in sorted(order, key=lambda i: hist.widths[i]):
    width, freq = int(hist.widths[idx]), int(hist.freqs[idx])
    bar = "#" * max(1, round(40 * freq / peak))
    marker = "  <- w*" if width == report.estimated_width else ""
    print(f"{width:>6} | {bar:<40} {freq}{marker}")

out.write_text(mw.histogram_to_csv(hist, report.n, report.mcu_width))
print(f"\nfull histogram written to {out}")
