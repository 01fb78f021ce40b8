"""Optional full-dataset evaluation runner.

The shipped test suite is desk-scale by design.  To measure accuracy on the
public datasets the method was designed around, fetch them yourself (they
are not redistributable here), convert to baseline JPEG where needed, and
point this script at the directories:

  USC-SIPI volumes (TIFF):   https://sipi.usc.edu/database/
  PASCAL VOC 2010 (JPEG):    http://host.robots.ox.ac.uk/pascal/VOC/voc2010/

USC-SIPI images are TIFF and need conversion, e.g. with ImageMagick:

  mogrify -format jpg -quality 90 -sampling-factor 2x2,1x1,1x1 *.tiff   # color
  mogrify -format jpg -quality 90 *.tiff                                # gray

Conversion settings change the entropy stream, so measured accuracy is
comparable to published figures, not bit-identical to them.  This script
reports whatever it measures, with no pass/fail threshold.

Usage: python tools/fetch_datasets.py DIR [DIR ...] [--json out.json]
"""

import argparse
import json
import sys
from pathlib import Path

import mcuwidth as mw


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("dirs", nargs="+", help="directories of baseline JPEGs")
    parser.add_argument("--json", metavar="PATH", help="write combined JSON here")
    parser.add_argument("--strip", action="store_true",
                        help="zero header dimensions before estimating")
    args = parser.parse_args(argv)

    combined = {}
    for d in args.dirs:
        root = Path(d)
        paths = sorted(p for p in root.glob("**/*")
                       if p.suffix.lower() in (".jpg", ".jpeg"))
        if not paths:
            print(f"{root}: no JPEG files found, skipping", file=sys.stderr)
            continue
        print(f"{root} ({len(paths)} files) ...")
        summary = mw.evaluate_corpus(paths, strip=args.strip)
        combined[str(root)] = json.loads(mw.summary_to_json(summary))
        print(f"  N={summary.total}  M={summary.correct}  "
              f"acc={100.0 * summary.accuracy:.2f}%")
        for v in summary.verdicts:
            if not v.correct:
                reason = v.error or f"estimated {v.w_estimated}, target {v.target}"
                print(f"    miss: {Path(v.path).name}: {reason}")
    if args.json:
        Path(args.json).write_text(json.dumps(combined, indent=2) + "\n")
        print(f"wrote {args.json}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
