"""Minimal baseline JPEG encoder for fixtures and synthetic corpora.

Produces byte-deterministic baseline sequential JFIF files (8-bit, Huffman
coded, standard tables, optional restart markers) so tests and corpus
generation never depend on an external encoder.  Supports grayscale plus
4:4:4, 4:2:2 and 4:2:0 color.
"""

from __future__ import annotations

import numpy as np

from .decoder import ZIGZAG, _BASIS

# Base quantization tables, natural (row-major) order.
LUMA_QUANT = (
    16, 11, 10, 16, 24, 40, 51, 61,
    12, 12, 14, 19, 26, 58, 60, 55,
    14, 13, 16, 24, 40, 57, 69, 56,
    14, 17, 22, 29, 51, 87, 80, 62,
    18, 22, 37, 56, 68, 109, 103, 77,
    24, 35, 55, 64, 81, 104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101,
    72, 92, 95, 98, 112, 100, 103, 99,
)
CHROMA_QUANT = (
    17, 18, 24, 47, 99, 99, 99, 99,
    18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99,
    47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
)

# Standard Huffman tables: (codes per bit length 1..16, symbols).
DC_LUMA = ((0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0),
           tuple(range(12)))
DC_CHROMA = ((0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0),
             tuple(range(12)))
AC_LUMA = (
    (0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 125),
    (1, 2, 3, 0, 4, 17, 5, 18, 33, 49, 65, 6, 19, 81, 97, 7, 34, 113,
     20, 50, 129, 145, 161, 8, 35, 66, 177, 193, 21, 82, 209, 240, 36,
     51, 98, 114, 130, 9, 10, 22, 23, 24, 25, 26, 37, 38, 39, 40, 41,
     42, 52, 53, 54, 55, 56, 57, 58, 67, 68, 69, 70, 71, 72, 73, 74,
     83, 84, 85, 86, 87, 88, 89, 90, 99, 100, 101, 102, 103, 104, 105,
     106, 115, 116, 117, 118, 119, 120, 121, 122, 131, 132, 133, 134,
     135, 136, 137, 138, 146, 147, 148, 149, 150, 151, 152, 153, 154,
     162, 163, 164, 165, 166, 167, 168, 169, 170, 178, 179, 180, 181,
     182, 183, 184, 185, 186, 194, 195, 196, 197, 198, 199, 200, 201,
     202, 210, 211, 212, 213, 214, 215, 216, 217, 218, 225, 226, 227,
     228, 229, 230, 231, 232, 233, 234, 241, 242, 243, 244, 245, 246,
     247, 248, 249, 250),
)
AC_CHROMA = (
    (0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 119),
    (0, 1, 2, 3, 17, 4, 5, 33, 49, 6, 18, 65, 81, 7, 97, 113, 19, 34,
     50, 129, 8, 20, 66, 145, 161, 177, 193, 9, 35, 51, 82, 240, 21,
     98, 114, 209, 10, 22, 36, 52, 225, 37, 241, 23, 24, 25, 26, 38,
     39, 40, 41, 42, 53, 54, 55, 56, 57, 58, 67, 68, 69, 70, 71, 72,
     73, 74, 83, 84, 85, 86, 87, 88, 89, 90, 99, 100, 101, 102, 103,
     104, 105, 106, 115, 116, 117, 118, 119, 120, 121, 122, 130, 131,
     132, 133, 134, 135, 136, 137, 138, 146, 147, 148, 149, 150, 151,
     152, 153, 154, 162, 163, 164, 165, 166, 167, 168, 169, 170, 178,
     179, 180, 181, 182, 183, 184, 185, 186, 194, 195, 196, 197, 198,
     199, 200, 201, 202, 210, 211, 212, 213, 214, 215, 216, 217, 218,
     226, 227, 228, 229, 230, 231, 232, 233, 234, 242, 243, 244, 245,
     246, 247, 248, 249, 250),
)

_SAMPLING = {"4:4:4": (1, 1), "4:2:2": (2, 1), "4:2:0": (2, 2)}


def scale_quant_table(base: tuple[int, ...], quality: int) -> np.ndarray:
    """Quality scaling in the classic 1..100 convention."""
    quality = min(max(int(quality), 1), 100)
    scale = 5000 // quality if quality < 50 else 200 - 2 * quality
    table = (np.asarray(base, dtype=np.int64) * scale + 50) // 100
    return np.clip(table, 1, 255).astype(np.int64)


def _code_map(counts, symbols) -> dict[int, tuple[int, int]]:
    codes = {}
    code = 0
    k = 0
    for length, count in enumerate(counts, start=1):
        for _ in range(count):
            codes[symbols[k]] = (code, length)
            code += 1
            k += 1
        code <<= 1
    return codes


class _BitWriter:
    def __init__(self):
        self.out = bytearray()
        self.acc = 0
        self.nbits = 0

    def write(self, code: int, length: int) -> None:
        self.acc = (self.acc << length) | code
        self.nbits += length
        while self.nbits >= 8:
            self.nbits -= 8
            byte = (self.acc >> self.nbits) & 0xFF
            self.out.append(byte)
            if byte == 0xFF:
                self.out.append(0x00)
        self.acc &= (1 << self.nbits) - 1

    def pad_to_byte(self) -> None:
        if self.nbits:
            pad = 8 - self.nbits
            self.write((1 << pad) - 1, pad)

    def emit_marker(self, low_byte: int) -> None:
        self.out += bytes((0xFF, low_byte))


def rgb_to_ycbcr(rgb: np.ndarray) -> np.ndarray:
    r = rgb[..., 0].astype(np.float64)
    g = rgb[..., 1].astype(np.float64)
    b = rgb[..., 2].astype(np.float64)
    out = np.empty(rgb.shape, dtype=np.float64)
    out[..., 0] = 0.299 * r + 0.587 * g + 0.114 * b
    out[..., 1] = 128.0 - 0.168735892 * r - 0.331264108 * g + 0.5 * b
    out[..., 2] = 128.0 + 0.5 * r - 0.418687589 * g - 0.081312411 * b
    return np.clip(np.floor(out + 0.5), 0.0, 255.0).astype(np.uint8)


def _segment(marker: int, payload: bytes) -> bytes:
    return marker.to_bytes(2, "big") + (len(payload) + 2).to_bytes(2, "big") + payload


def _dct_blocks(plane: np.ndarray) -> np.ndarray:
    """Forward DCT of an (8r, 8c) plane into (r, c, 8, 8) coefficients."""
    h, w = plane.shape
    x = plane.astype(np.float64) - 128.0
    blocks = x.reshape(h // 8, 8, w // 8, 8).transpose(0, 2, 1, 3)
    return _BASIS @ blocks @ _BASIS.T


def _quantize_zigzag(coef: np.ndarray, qtable: np.ndarray) -> np.ndarray:
    q = np.rint(coef / qtable.reshape(8, 8)).astype(np.int32)
    np.clip(q[..., 1:, :], -1023, 1023, out=q[..., 1:, :])
    np.clip(q[..., :, 1:], -1023, 1023, out=q[..., :, 1:])
    np.clip(q[..., 0, 0], -2047, 2047, out=q[..., 0, 0])
    flat = q.reshape(*q.shape[:-2], 64)
    return flat[..., np.asarray(ZIGZAG)]


def encode_baseline(image: np.ndarray, quality: int = 90,
                    subsampling: str = "4:4:4", restart_interval: int = 0,
                    return_units: bool = False):
    """Encode a uint8 image as a baseline JFIF byte stream.

    ``image`` is (H, W) for grayscale or (H, W, 3) RGB.  ``subsampling``
    applies to color input only.  With ``return_units`` the quantized
    zig-zag coefficient units (MCU-interleaved, as written to the stream)
    are returned alongside the bytes, which round-trip tests compare against
    the decoder's entropy stage.
    """
    arr = np.asarray(image)
    if arr.dtype != np.uint8:
        raise ValueError("image must be uint8")
    gray = arr.ndim == 2
    if not gray and (arr.ndim != 3 or arr.shape[2] != 3):
        raise ValueError("image must be (H, W) or (H, W, 3)")
    if subsampling not in _SAMPLING:
        raise ValueError(f"unknown subsampling {subsampling!r}")

    height, width = arr.shape[:2]
    if height < 1 or width < 1:
        raise ValueError("empty image")

    if gray:
        y_h = y_v = 1
        planes = [arr]
        samplings = [(1, 1)]
        quant_ids = [0]
        table_ids = [0]
        comp_ids = [1]
    else:
        y_h, y_v = _SAMPLING[subsampling]
        ycc = rgb_to_ycbcr(arr)
        planes = [ycc[..., 0], ycc[..., 1], ycc[..., 2]]
        samplings = [(y_h, y_v), (1, 1), (1, 1)]
        quant_ids = [0, 1, 1]
        table_ids = [0, 1, 1]
        comp_ids = [1, 2, 3]

    mcu_w, mcu_h = 8 * y_h, 8 * y_v
    pad_h = (-height) % mcu_h
    pad_w = (-width) % mcu_w
    mcu_rows = (height + pad_h) // mcu_h
    mcu_cols = (width + pad_w) // mcu_w
    n_mcus = mcu_rows * mcu_cols

    qtables = [scale_quant_table(LUMA_QUANT, quality)]
    if not gray:
        qtables.append(scale_quant_table(CHROMA_QUANT, quality))

    unit_arrays = []
    for plane, (h, v), qid in zip(planes, samplings, quant_ids):
        padded = np.pad(plane, ((0, pad_h), (0, pad_w)), mode="edge")
        if (h, v) != (y_h, y_v):
            # Box-average chroma down to its sampling resolution.
            fh, fv = y_h // h, y_v // v
            ph, pw = padded.shape
            small = padded.reshape(ph // fv, fv, pw // fh, fh).astype(np.float64)
            padded = np.clip(np.floor(small.mean(axis=(1, 3)) + 0.5), 0, 255)
            padded = padded.astype(np.uint8)
        coef = _dct_blocks(padded)
        zig = _quantize_zigzag(coef, qtables[qid])     # (rows*v, cols*h, 64)
        per_mcu = (zig.reshape(mcu_rows, v, mcu_cols, h, 64)
                   .transpose(0, 2, 1, 3, 4)
                   .reshape(n_mcus, v * h, 64))
        unit_arrays.append(per_mcu)
    units = np.concatenate(unit_arrays, axis=1)        # (n_mcus, units_per_mcu, 64)

    dc_maps = [_code_map(*DC_LUMA)]
    ac_maps = [_code_map(*AC_LUMA)]
    if not gray:
        dc_maps.append(_code_map(*DC_CHROMA))
        ac_maps.append(_code_map(*AC_CHROMA))

    plan = []
    for ci, (h, v) in enumerate(samplings):
        plan.extend([ci] * (h * v))

    writer = _BitWriter()
    preds = [0] * len(planes)
    unit_lists = units.tolist()
    for mcu_idx in range(n_mcus):
        if restart_interval and mcu_idx and mcu_idx % restart_interval == 0:
            writer.pad_to_byte()
            writer.emit_marker(0xD0 + (mcu_idx // restart_interval - 1) % 8)
            preds = [0] * len(planes)
        mcu_units = unit_lists[mcu_idx]
        for ui, ci in enumerate(plan):
            coef = mcu_units[ui]
            dc_map, ac_map = dc_maps[table_ids[ci]], ac_maps[table_ids[ci]]
            diff = coef[0] - preds[ci]
            preds[ci] = coef[0]
            size = abs(diff).bit_length()
            code, length = dc_map[size]
            writer.write(code, length)
            if size:
                writer.write(diff if diff >= 0 else diff + (1 << size) - 1, size)
            run = 0
            last_nonzero = 0
            for k in range(63, 0, -1):
                if coef[k]:
                    last_nonzero = k
                    break
            for k in range(1, last_nonzero + 1):
                val = coef[k]
                if val == 0:
                    run += 1
                    continue
                while run > 15:
                    code, length = ac_map[0xF0]
                    writer.write(code, length)
                    run -= 16
                size = abs(val).bit_length()
                code, length = ac_map[(run << 4) | size]
                writer.write(code, length)
                writer.write(val if val >= 0 else val + (1 << size) - 1, size)
                run = 0
            if last_nonzero < 63:
                code, length = ac_map[0x00]
                writer.write(code, length)
    writer.pad_to_byte()

    out = bytearray(b"\xFF\xD8")
    out += _segment(0xFFE0, b"JFIF\x00\x01\x01\x00\x00\x01\x00\x01\x00\x00")

    zz = np.asarray(ZIGZAG)
    dqt_payload = bytearray()
    for tid, table in enumerate(qtables):
        dqt_payload.append(tid)
        dqt_payload += bytes(int(x) for x in table[zz])
    out += _segment(0xFFDB, bytes(dqt_payload))

    sof = bytearray([8]) + height.to_bytes(2, "big") + width.to_bytes(2, "big")
    sof.append(len(planes))
    for cid, (h, v), qid in zip(comp_ids, samplings, quant_ids):
        sof += bytes((cid, (h << 4) | v, qid))
    out += _segment(0xFFC0, bytes(sof))

    dht_payload = bytearray()
    huff_specs = [(0x00, DC_LUMA), (0x10, AC_LUMA)]
    if not gray:
        huff_specs += [(0x01, DC_CHROMA), (0x11, AC_CHROMA)]
    for tc_th, (counts, symbols) in huff_specs:
        dht_payload.append(tc_th)
        dht_payload += bytes(counts)
        dht_payload += bytes(symbols)
    out += _segment(0xFFC4, bytes(dht_payload))

    if restart_interval:
        out += _segment(0xFFDD, restart_interval.to_bytes(2, "big"))

    sos = bytearray([len(planes)])
    for cid, tid in zip(comp_ids, table_ids):
        sos += bytes((cid, (tid << 4) | tid))
    sos += bytes((0, 63, 0))
    out += _segment(0xFFDA, bytes(sos))

    out += writer.out
    out += b"\xFF\xD9"
    if return_units:
        return bytes(out), units
    return bytes(out)
