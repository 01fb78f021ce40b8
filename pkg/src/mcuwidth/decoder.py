"""Baseline JPEG entropy decoding into an ordered MCU sequence.

The decoder never consults the declared image dimensions.  It walks the
entropy-coded scan greedily, producing MCUs in stream order until it runs
out of bits, and keeps only what width estimation needs: each MCU's
full-resolution top and bottom pixel rows.  A full-grid path is kept for
raster reconstruction and debugging.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    CorruptHuffmanStream,
    DecodeWarning,
    EmptyScan,
    PredictorOverflow,
    WidthNotMultipleOfK,
)
from .stream_parser import DecodeContext, HuffmanSpec

# Natural (row-major) index of the k-th coefficient in zig-zag order.
ZIGZAG = (
    0, 1, 8, 16, 9, 2, 3, 10,
    17, 24, 32, 25, 18, 11, 4, 5,
    12, 19, 26, 33, 40, 48, 41, 34,
    27, 20, 13, 6, 7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36,
    29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46,
    53, 60, 61, 54, 47, 55, 62, 63,
)

# Orthonormal 8-point DCT basis scaled for the JPEG convention:
# spatial = _BASIS.T @ coefficients @ _BASIS
_BASIS = np.array(
    [[0.5 * (1.0 / math.sqrt(2.0) if u == 0 else 1.0)
      * math.cos((2 * x + 1) * u * math.pi / 16.0)
      for x in range(8)] for u in range(8)])


class _OutOfBits(Exception):
    """Internal: the scan ended mid-read; the current MCU is discarded."""


class _BitReader:
    """MSB-first bit reader over an unstuffed entropy chunk."""

    __slots__ = ("data", "pos", "n", "acc", "nbits")

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0
        self.n = len(data)
        self.acc = 0
        self.nbits = 0

    def _fill(self, need: int) -> bool:
        while self.nbits < need:
            if self.pos >= self.n:
                return False
            self.acc = (self.acc << 8) | self.data[self.pos]
            self.pos += 1
            self.nbits += 8
        return True

    def receive(self, k: int) -> int:
        if k == 0:
            return 0
        if not self._fill(k):
            raise _OutOfBits
        self.nbits -= k
        v = (self.acc >> self.nbits) & ((1 << k) - 1)
        self.acc &= (1 << self.nbits) - 1
        return v


class _HuffmanDecoder:
    """Canonical Huffman decoder with an 8-bit fast lookup table."""

    __slots__ = ("fast", "mincode", "maxcode", "valptr", "symbols")

    def __init__(self, spec: HuffmanSpec):
        self.symbols = spec.symbols
        self.fast = [0] * 256
        self.mincode = [0] * 17
        self.maxcode = [-1] * 17
        self.valptr = [0] * 17
        code = 0
        k = 0
        for length, count in enumerate(spec.counts, start=1):
            if count:
                self.valptr[length] = k
                self.mincode[length] = code
                for _ in range(count):
                    if length <= 8:
                        base = code << (8 - length)
                        entry = (length << 8) | spec.symbols[k]
                        for suffix in range(1 << (8 - length)):
                            self.fast[base + suffix] = entry
                    code += 1
                    k += 1
                self.maxcode[length] = code - 1
            code <<= 1

    def decode(self, r: _BitReader) -> int:
        if r._fill(8):
            idx = (r.acc >> (r.nbits - 8)) & 0xFF
            entry = self.fast[idx]
            if entry:
                length = entry >> 8
                r.nbits -= length
                r.acc &= (1 << r.nbits) - 1
                return entry & 0xFF
            code = idx
            length = 8
            while length < 16:
                length += 1
                if not r._fill(length):
                    raise _OutOfBits
                code = (code << 1) | ((r.acc >> (r.nbits - length)) & 1)
                if self.mincode[length] <= code <= self.maxcode[length]:
                    r.nbits -= length
                    r.acc &= (1 << r.nbits) - 1
                    return self.symbols[self.valptr[length] + code - self.mincode[length]]
            raise CorruptHuffmanStream("bit pattern matches no Huffman code")
        # Fewer than 8 bits remain; a short code may still fit.
        avail = r.nbits
        for length in range(1, avail + 1):
            code = (r.acc >> (avail - length)) & ((1 << length) - 1)
            if self.mincode[length] <= code <= self.maxcode[length]:
                r.nbits -= length
                r.acc &= (1 << r.nbits) - 1
                return self.symbols[self.valptr[length] + code - self.mincode[length]]
        raise _OutOfBits


def _extend(v: int, size: int) -> int:
    if v < (1 << (size - 1)):
        return v - (1 << size) + 1
    return v


def split_scan(scan: bytes) -> tuple[list[bytes], list[int], list[int]]:
    """Split raw scan bytes into unstuffed entropy chunks at restart markers.

    Returns the chunks, the modulo-8 indices of the restart markers that
    separated them, and each chunk's starting offset in the raw scan.
    Scanning stops at any non-restart marker (EOI included) or at the end of
    the buffer; a dangling 0xFF is dropped.
    """
    chunks: list[bytes] = []
    rst_ids: list[int] = []
    starts: list[int] = [0]
    out = bytearray()
    i, n = 0, len(scan)
    while i < n:
        b = scan[i]
        if b != 0xFF:
            out.append(b)
            i += 1
            continue
        if i + 1 >= n:
            break
        nxt = scan[i + 1]
        if nxt == 0x00:
            out.append(0xFF)
            i += 2
        elif 0xD0 <= nxt <= 0xD7:
            chunks.append(bytes(out))
            out = bytearray()
            rst_ids.append(nxt & 0x07)
            starts.append(i + 2)
            i += 2
        elif nxt == 0xFF:
            i += 1
        else:
            break
    chunks.append(bytes(out))
    return chunks, rst_ids, starts


def _entropy_decode(ctx: DecodeContext, scan: bytes) -> tuple[np.ndarray, int]:
    """Huffman-decode the scan into quantized zig-zag coefficients.

    Returns an int32 array of shape (n_mcus * units_per_mcu, 64) and the
    number of complete MCUs.  DC prediction is applied and reset at every
    restart boundary; a trailing incomplete MCU is discarded.
    """
    comps = ctx.components
    dc_dec = {}
    ac_dec = {}
    for c in comps:
        if c.dc_table_id not in dc_dec:
            dc_dec[c.dc_table_id] = _HuffmanDecoder(ctx.dc_tables[c.dc_table_id])
        if c.ac_table_id not in ac_dec:
            ac_dec[c.ac_table_id] = _HuffmanDecoder(ctx.ac_tables[c.ac_table_id])

    plan = []
    for ci, c in enumerate(comps):
        plan.extend([ci] * (c.h_sampling * c.v_sampling))
    dc_for = [dc_dec[c.dc_table_id] for c in comps]
    ac_for = [ac_dec[c.ac_table_id] for c in comps]

    chunks, rst_ids, chunk_starts = split_scan(scan)
    for seq, rid in enumerate(rst_ids):
        if rid != seq % 8:
            warnings.warn("restart markers out of sequence; resynchronizing anyway",
                          DecodeWarning, stacklevel=3)
            break
    if rst_ids and ctx.restart_interval == 0:
        warnings.warn("restart markers present but no DRI segment; resynchronizing",
                      DecodeWarning, stacklevel=3)

    units: list[list[int]] = []
    mcu_count = 0
    interval = ctx.restart_interval
    for chunk_idx, chunk in enumerate(chunks):
        reader = _BitReader(chunk)
        preds = [0] * len(comps)
        chunk_mcus = 0
        while True:
            saved = len(units)
            consumed_before = (reader.pos << 3) - reader.nbits
            try:
                for ci in plan:
                    coef = [0] * 64
                    # DC: category, then that many magnitude bits.
                    s = dc_for[ci].decode(reader)
                    if s > 11:
                        raise CorruptHuffmanStream(f"DC magnitude category {s}")
                    diff = _extend(reader.receive(s), s) if s else 0
                    pred = preds[ci] + diff
                    if not -2048 <= pred <= 2047:
                        raise PredictorOverflow(
                            f"DC predictor {pred} for component {comps[ci].component_id}")
                    preds[ci] = pred
                    coef[0] = pred
                    # AC: run/size pairs in zig-zag order until EOB.
                    k = 1
                    while k < 64:
                        rs = ac_for[ci].decode(reader)
                        size = rs & 0x0F
                        run = rs >> 4
                        if size == 0:
                            if run == 15:
                                k += 16
                                continue
                            if run == 0:
                                break
                            raise CorruptHuffmanStream(f"AC run/size byte 0x{rs:02X}")
                        k += run
                        if k > 63:
                            raise CorruptHuffmanStream("AC run past end of block")
                        coef[k] = _extend(reader.receive(size), size)
                        k += 1
                    units.append(coef)
            except _OutOfBits:
                del units[saved:]
                consumed = (reader.pos << 3) - reader.nbits - consumed_before
                # A cleanly padded chunk ends with at most 7 filler bits; a
                # failed attempt that got further than that means the data
                # itself was cut mid-MCU.
                if consumed >= 8:
                    warnings.warn(
                        f"discarded incomplete trailing MCU near byte "
                        f"{ctx.scan_offset + chunk_starts[chunk_idx] + reader.pos}"
                        f" of the stream",
                        DecodeWarning, stacklevel=3)
                break
            mcu_count += 1
            chunk_mcus += 1
        if interval and chunk_idx < len(chunks) - 1 and chunk_mcus != interval:
            warnings.warn(
                f"restart chunk {chunk_idx} held {chunk_mcus} MCUs, "
                f"expected {interval}", DecodeWarning, stacklevel=3)

    if mcu_count < 2:
        raise EmptyScan(f"decoded {mcu_count} complete MCUs, need at least 2")
    arr = np.array(units, dtype=np.int32)
    return arr, mcu_count


@dataclass(frozen=True)
class McuEdgeProfile:
    """Top and bottom pixel rows of one MCU, K pixels by C components."""

    index: int                 # 1-based position in decode order
    top_row: np.ndarray        # (K, C) uint8
    bottom_row: np.ndarray     # (K, C) uint8


@dataclass
class McuSequence:
    """The decoded MCUs in stream order, reduced to their edge rows."""

    tops: np.ndarray           # (n, K, C) uint8
    bottoms: np.ndarray        # (n, K, C) uint8
    mcu_width: int             # K, 8 or 16
    component_count: int       # C, 1 or 3

    @property
    def n(self) -> int:
        return len(self.tops)

    def profile(self, index: int) -> McuEdgeProfile:
        if not 1 <= index <= self.n:
            raise IndexError(f"MCU index {index} outside 1..{self.n}")
        return McuEdgeProfile(index, self.tops[index - 1], self.bottoms[index - 1])

    @property
    def profiles(self) -> list[McuEdgeProfile]:
        return [self.profile(i) for i in range(1, self.n + 1)]


def decode_mcu_grids(ctx: DecodeContext, scan: bytes) -> np.ndarray:
    """Decode the scan into full MCU pixel grids.

    Returns a uint8 array of shape (n, 8*Vmax, K, C): dequantized, inverse
    transformed, level shifted to [0, 255], with subsampled components
    replicated up to MCU resolution (nearest neighbor).
    """
    coeffs, n_mcus = _entropy_decode(ctx, scan)
    comps = ctx.components
    h_max, v_max = ctx.h_max, ctx.v_max
    k_px, mcu_h = 8 * h_max, 8 * v_max
    n_comp = len(comps)

    units_per_mcu = sum(c.h_sampling * c.v_sampling for c in comps)
    per_mcu = coeffs.reshape(n_mcus, units_per_mcu, 64)

    grids = np.empty((n_mcus, mcu_h, k_px, n_comp), dtype=np.uint8)
    zz = np.asarray(ZIGZAG)
    unit_base = 0
    for ci, comp in enumerate(comps):
        h, v = comp.h_sampling, comp.v_sampling
        q = np.asarray(ctx.quant_tables[comp.quant_table_id], dtype=np.int32)
        zig = per_mcu[:, unit_base:unit_base + h * v, :] * q
        unit_base += h * v

        nat = np.zeros_like(zig)
        nat[..., zz] = zig
        coef = nat.reshape(n_mcus, v, h, 8, 8).astype(np.float64)
        spatial = _BASIS.T @ coef @ _BASIS
        pix = np.clip(np.floor(spatial + 128.5), 0.0, 255.0).astype(np.uint8)

        # (n, v, h, 8, 8) -> (n, 8v, 8h), then replicate up to MCU resolution.
        plane = pix.transpose(0, 1, 3, 2, 4).reshape(n_mcus, 8 * v, 8 * h)
        if v < v_max:
            plane = np.repeat(plane, v_max // v, axis=1)
        if h < h_max:
            plane = np.repeat(plane, h_max // h, axis=2)
        grids[..., ci] = plane
    return grids


def decode_mcus(ctx: DecodeContext, scan: bytes) -> McuSequence:
    """Decode the scan into the ordered MCU sequence of edge-row profiles."""
    grids = decode_mcu_grids(ctx, scan)
    return McuSequence(
        tops=np.ascontiguousarray(grids[:, 0]),
        bottoms=np.ascontiguousarray(grids[:, -1]),
        mcu_width=ctx.mcu_width,
        component_count=ctx.component_count,
    )


def ycbcr_to_rgb(ycc: np.ndarray) -> np.ndarray:
    """Standard JFIF YCbCr -> RGB conversion, rounded and clamped to uint8."""
    y = ycc[..., 0].astype(np.float64)
    cb = ycc[..., 1].astype(np.float64) - 128.0
    cr = ycc[..., 2].astype(np.float64) - 128.0
    rgb = np.empty(ycc.shape, dtype=np.float64)
    rgb[..., 0] = y + 1.402 * cr
    rgb[..., 1] = y - 0.344136 * cb - 0.714136 * cr
    rgb[..., 2] = y + 1.772 * cb
    return np.clip(np.floor(rgb + 0.5), 0.0, 255.0).astype(np.uint8)


def reconstruct_image(ctx: DecodeContext, scan: bytes, width_px: int) -> np.ndarray:
    """Lay the decoded MCUs out row-major at the given pixel width.

    ``width_px`` must be a positive multiple of the MCU width K.  The final
    partial MCU row, if any, is padded with mid-gray.  Returns an RGB
    (H, W, 3) array for 3-component files and a grayscale (H, W) array for
    single-component files.
    """
    k_px = ctx.mcu_width
    if width_px <= 0 or width_px % k_px != 0:
        raise WidthNotMultipleOfK(
            f"width {width_px} is not a positive multiple of K={k_px}")
    grids = decode_mcu_grids(ctx, scan)
    n, mcu_h, _, n_comp = grids.shape

    per_row = width_px // k_px
    rows = -(-n // per_row)
    pad = rows * per_row - n
    if pad:
        filler = np.full((pad, mcu_h, k_px, n_comp), 128, dtype=np.uint8)
        grids = np.concatenate([grids, filler], axis=0)
    raster = (grids.reshape(rows, per_row, mcu_h, k_px, n_comp)
              .transpose(0, 2, 1, 3, 4)
              .reshape(rows * mcu_h, width_px, n_comp))
    if n_comp == 3:
        return ycbcr_to_rgb(raster)
    return raster[..., 0]
