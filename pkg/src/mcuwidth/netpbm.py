"""Binary netpbm output: PPM (P6) for color rasters, PGM (P5) for grayscale.

Headers carry no comments, so identical rasters always serialize to
identical bytes, which golden-file tests rely on.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def raster_to_netpbm(raster: np.ndarray) -> bytes:
    arr = np.asarray(raster, dtype=np.uint8)
    if arr.ndim == 3 and arr.shape[2] == 3:
        magic = b"P6"
    elif arr.ndim == 2:
        magic = b"P5"
    else:
        raise ValueError(f"raster shape {arr.shape} is neither (H,W) nor (H,W,3)")
    h, w = arr.shape[:2]
    return b"%s\n%d %d\n255\n" % (magic, w, h) + arr.tobytes()


def write_netpbm(path, raster: np.ndarray) -> Path:
    path = Path(path)
    path.write_bytes(raster_to_netpbm(raster))
    return path


def read_netpbm(path) -> np.ndarray:
    """Read back a P5/P6 file written by this module."""
    data = Path(path).read_bytes()
    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos] in b" \t\r\n":
            pos += 1
        start = pos
        while pos < len(data) and data[pos] not in b" \t\r\n":
            pos += 1
        fields.append(data[start:pos])
    pos += 1   # single whitespace after maxval
    magic, w, h = fields[0], int(fields[1]), int(fields[2])
    if int(fields[3]) != 255:
        raise ValueError("only 8-bit netpbm is supported")
    if magic == b"P6":
        shape: tuple[int, ...] = (h, w, 3)
    elif magic == b"P5":
        shape = (h, w)
    else:
        raise ValueError(f"unsupported netpbm magic {magic!r}")
    count = int(np.prod(shape))
    return np.frombuffer(data, dtype=np.uint8, count=count, offset=pos).reshape(shape)
