"""Command-line front end.

Exit codes are a stable contract for scripting: 0 success, 1 usage or
configuration error, 2 parse/decode failure.  Warnings and diagnostics go
to stderr; stdout carries only the requested payload.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .decoder import decode_mcus, reconstruct_image
from .errors import (
    EmptyCorpus,
    InvalidRange,
    JpegError,
    WidthNotMultipleOfK,
)
from .estimator import estimate_width, histogram_to_csv, report_to_json
from .evaluate import evaluate_corpus, generate_synthetic_corpus, summary_to_json, summary_to_table
from .netpbm import write_netpbm
from .stream_parser import parse_stream, strip_dimensions

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; this tool reserves 2 for data errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _load_sequence(path: str, strip: bool):
    data = _read_input(path)
    if strip:
        data = strip_dimensions(data)
    ctx = parse_stream(data)
    return ctx, decode_mcus(ctx, ctx.scan_data)


def _cmd_estimate(args) -> int:
    _, seq = _load_sequence(args.file, args.strip)
    report = estimate_width(seq, args.max_width)
    if report.tie_broken:
        print("warning: frequency tie, reporting the smallest tied width",
              file=sys.stderr)
    if args.json:
        print(report_to_json(report))
    else:
        print(f"estimated_width: {report.estimated_width}")
    return 0


def _cmd_histogram(args) -> int:
    _, seq = _load_sequence(args.file, args.strip)
    report = estimate_width(seq, args.max_width)
    csv = histogram_to_csv(report.histogram, report.n, report.mcu_width)
    if args.out:
        Path(args.out).write_text(csv)
    else:
        sys.stdout.write(csv)
    return 0


def _cmd_reconstruct(args) -> int:
    data = _read_input(args.file)
    if args.strip:
        data = strip_dimensions(data)
    ctx = parse_stream(data)
    width = args.width
    if width is None:
        report = estimate_width(decode_mcus(ctx, ctx.scan_data), args.max_width)
        width = report.estimated_width
    raster = reconstruct_image(ctx, ctx.scan_data, width)
    out = args.out
    if out is None:
        if args.file == "-":
            print("mcuwidth: --out is required when reading from stdin",
                  file=sys.stderr)
            return USAGE_ERROR
        suffix = ".ppm" if raster.ndim == 3 else ".pgm"
        out = str(Path(args.file).with_suffix(suffix))
    write_netpbm(out, raster)
    print(f"wrote {out} ({raster.shape[1]}x{raster.shape[0]})", file=sys.stderr)
    return 0


def _cmd_eval(args) -> int:
    root = Path(args.dir)
    paths = sorted(p for p in root.glob("*") if p.suffix.lower() in (".jpg", ".jpeg"))
    summary = evaluate_corpus(paths, strip=args.strip, max_width=args.max_width)
    payload = summary_to_json(summary)
    if args.out:
        Path(args.out).write_text(payload + "\n")
    if args.json:
        print(payload)
    else:
        sys.stdout.write(summary_to_table(summary))
    return 0


def _cmd_synth(args) -> int:
    lo, hi = args.width_range
    paths = generate_synthetic_corpus(
        args.dir, args.count, width_range=(lo, hi), seed=args.seed,
        periodic=args.periodic)
    for p in paths:
        print(p)
    return 0


def _cmd_strip(args) -> int:
    data = _read_input(args.file)
    stripped = strip_dimensions(data)
    out = args.out
    if out is None:
        src = Path(args.file)
        out = str(src.with_name(src.stem + ".stripped" + src.suffix))
    Path(out).write_bytes(stripped)
    print(f"wrote {out}", file=sys.stderr)
    return 0


def _width_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mcuwidth",
                     description="JPEG width estimation from the MCU stream")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_input=True):
        if with_input:
            p.add_argument("file", help="JPEG path, or - for stdin")
        p.add_argument("--strip", action="store_true",
                       help="zero the header dimensions before processing")
        p.add_argument("--max-width", type=int, default=None, metavar="PX",
                       help="cap the candidate width search")

    p = sub.add_parser("estimate", help="estimate the image width")
    add_common(p)
    p.add_argument("--json", action="store_true", help="emit the full report as JSON")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("histogram", help="dump the candidate-width histogram as CSV")
    add_common(p)
    p.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")
    p.set_defaults(func=_cmd_histogram)

    p = sub.add_parser("reconstruct", help="write the decoded raster as PPM/PGM")
    add_common(p)
    p.add_argument("--width", type=int, default=None, metavar="PX",
                   help="layout width (default: the estimate)")
    p.add_argument("--out", metavar="PATH", help="output image path")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("eval", help="score the estimator over a directory of JPEGs")
    p.add_argument("dir", help="directory of .jpg/.jpeg files with intact headers")
    p.add_argument("--strip", action="store_true")
    p.add_argument("--max-width", type=int, default=None, metavar="PX")
    p.add_argument("--json", action="store_true", help="print JSON instead of the table")
    p.add_argument("--out", metavar="PATH", help="also write the JSON report here")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("synth", help="generate a deterministic synthetic corpus")
    p.add_argument("dir", help="output directory")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width-range", type=_width_range, default=(174, 500),
                   metavar="LO:HI")
    p.add_argument("--periodic", action="store_true",
                   help="generate the expected-failure striped class")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("strip", help="zero the SOF dimension fields of a file")
    p.add_argument("file", help="JPEG path, or - for stdin")
    p.add_argument("--out", metavar="PATH", help="output path")
    p.set_defaults(func=_cmd_strip)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WidthNotMultipleOfK as exc:
        print(f"mcuwidth: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (EmptyCorpus, InvalidRange) as exc:
        print(f"mcuwidth: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except JpegError as exc:
        print(f"mcuwidth: {exc}", file=sys.stderr)
        return DATA_ERROR
    except OSError as exc:
        print(f"mcuwidth: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
