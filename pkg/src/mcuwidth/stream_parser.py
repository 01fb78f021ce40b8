"""Marker-level parsing of baseline JPEG byte streams.

The parser extracts everything the entropy decoder needs (component layout,
Huffman and quantization tables, restart interval, the raw scan range) while
treating the declared image dimensions as optional, untrusted metadata: a
zeroed width field parses fine and simply leaves ``declared_width`` unset.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    MalformedSegment,
    MissingSOI,
    UnresolvedTableReference,
    UnsupportedMarker,
    UnsupportedSampling,
)

SOI = 0xFFD8
EOI = 0xFFD9
SOS = 0xFFDA
DQT = 0xFFDB
DRI = 0xFFDD
DHT = 0xFFC4
DNL = 0xFFDC
DAC = 0xFFCC
TEM = 0xFF01
SOF0 = 0xFFC0
SOF1 = 0xFFC1
COM = 0xFFFE

RST_RANGE = range(0xFFD0, 0xFFD8)
APP_RANGE = range(0xFFE0, 0xFFF0)
SOF_RANGE = range(0xFFC0, 0xFFD0)

# Markers that carry no length field.
_STANDALONE = frozenset({SOI, EOI, TEM}) | frozenset(RST_RANGE)

MARKER_NAMES = {SOI: "SOI", EOI: "EOI", SOS: "SOS", DQT: "DQT", DRI: "DRI",
                DHT: "DHT", DNL: "DNL", DAC: "DAC", TEM: "TEM", COM: "COM"}
MARKER_NAMES.update({0xFFC0 + i: f"SOF{i}" for i in range(16) if 0xFFC0 + i not in (DHT, DAC)})
MARKER_NAMES.update({m: f"RST{m - 0xFFD0}" for m in RST_RANGE})
MARKER_NAMES.update({m: f"APP{m - 0xFFE0}" for m in APP_RANGE})


def marker_name(marker: int) -> str:
    return MARKER_NAMES.get(marker, f"0x{marker:04X}")


@dataclass(frozen=True)
class MarkerSegment:
    """One marker plus its payload, as laid out in the file."""

    marker: int
    offset: int
    payload: bytes = b""

    @property
    def standalone(self) -> bool:
        return self.marker in _STANDALONE

    def serialize(self) -> bytes:
        """Re-emit the exact byte span this segment occupied."""
        head = self.marker.to_bytes(2, "big")
        if self.standalone:
            return head
        return head + (len(self.payload) + 2).to_bytes(2, "big") + self.payload

    @property
    def size(self) -> int:
        return 2 if self.standalone else 4 + len(self.payload)


@dataclass(frozen=True)
class ComponentSpec:
    """Per-component decoding parameters merged from SOF and SOS."""

    component_id: int
    h_sampling: int
    v_sampling: int
    quant_table_id: int
    dc_table_id: int
    ac_table_id: int


@dataclass(frozen=True)
class HuffmanSpec:
    """Canonical Huffman table: code counts per bit length plus symbols."""

    counts: tuple[int, ...]   # 16 entries, codes of length 1..16
    symbols: tuple[int, ...]


@dataclass
class DecodeContext:
    """Everything needed to decode the entropy-coded scan of one file.

    Quantization tables keep the zig-zag element order they have in the
    stream, matching the order of entropy-decoded coefficients.
    """

    components: list[ComponentSpec]
    dc_tables: list[HuffmanSpec | None] = field(default_factory=lambda: [None] * 4)
    ac_tables: list[HuffmanSpec | None] = field(default_factory=lambda: [None] * 4)
    quant_tables: list[tuple[int, ...] | None] = field(default_factory=lambda: [None] * 4)
    restart_interval: int = 0
    declared_width: int | None = None
    declared_height: int | None = None
    scan_data: bytes = b""
    scan_offset: int = 0

    @property
    def h_max(self) -> int:
        return max(c.h_sampling for c in self.components)

    @property
    def v_max(self) -> int:
        return max(c.v_sampling for c in self.components)

    @property
    def mcu_width(self) -> int:
        """Pixel width K of one MCU, 8 * max horizontal sampling."""
        return 8 * self.h_max

    @property
    def mcu_height(self) -> int:
        return 8 * self.v_max

    @property
    def component_count(self) -> int:
        return len(self.components)


def _read_u16(data: bytes, pos: int) -> int:
    return (data[pos] << 8) | data[pos + 1]


def scan_segments(data: bytes) -> tuple[list[MarkerSegment], list[tuple[int, int]]]:
    """Tokenize a JPEG stream into marker segments plus entropy-scan spans.

    Performs only structural validation; payload interpretation happens in
    :func:`parse_stream`.  Returns the segments in file order and the
    ``(start, end)`` byte spans of the entropy-coded data following each SOS.
    """
    n = len(data)
    if n < 2 or _read_u16(data, 0) != SOI:
        raise MissingSOI("input does not start with SOI (0xFFD8)", offset=0)

    segments = [MarkerSegment(SOI, 0)]
    spans: list[tuple[int, int]] = []
    pos = 2
    while pos < n:
        # Fill bytes: any run of 0xFF before the marker code is legal padding.
        if data[pos] != 0xFF:
            raise MalformedSegment(
                f"expected a marker, found 0x{data[pos]:02X}", offset=pos)
        while pos + 1 < n and data[pos + 1] == 0xFF:
            pos += 1
        if pos + 1 >= n:
            break
        code = data[pos + 1]
        if code == 0x00:
            raise MalformedSegment("stuffed 0xFF00 outside scan data", offset=pos)
        marker = 0xFF00 | code

        if marker in _STANDALONE:
            segments.append(MarkerSegment(marker, pos))
            pos += 2
            if marker == EOI:
                break
            continue

        if pos + 4 > n:
            raise MalformedSegment(f"{marker_name(marker)} truncated", offset=pos)
        length = _read_u16(data, pos + 2)
        if length < 2 or pos + 2 + length > n:
            raise MalformedSegment(
                f"{marker_name(marker)} declares length {length} past end of input",
                offset=pos)
        payload = data[pos + 4:pos + 2 + length]
        segments.append(MarkerSegment(marker, pos, payload))
        pos += 2 + length

        if marker == SOS:
            start = pos
            while pos + 1 < n:
                if data[pos] != 0xFF:
                    pos += 1
                    continue
                nxt = data[pos + 1]
                if nxt == 0x00 or 0xD0 <= nxt <= 0xD7:
                    pos += 2
                    continue
                if nxt == 0xFF:   # fill byte inside a marker prefix
                    pos += 1
                    continue
                break
            end = pos if pos + 1 < n else n
            spans.append((start, end))
            pos = end
    return segments, spans


def _parse_sof(seg: MarkerSegment) -> tuple[int | None, int | None, list[tuple[int, int, int, int]]]:
    p = seg.payload
    if len(p) < 6:
        raise MalformedSegment("frame header too short", offset=seg.offset)
    precision = p[0]
    if precision != 8:
        raise UnsupportedMarker(
            f"{precision}-bit sample precision (only 8-bit is supported)",
            offset=seg.offset)
    height = _read_u16(p, 1)
    width = _read_u16(p, 3)
    ncomp = p[5]
    if ncomp not in (1, 3):
        raise UnsupportedSampling(
            f"{ncomp} components (only 1 or 3 supported)", offset=seg.offset)
    if len(p) != 6 + 3 * ncomp:
        raise MalformedSegment("frame header length mismatch", offset=seg.offset)
    comps = []
    for i in range(ncomp):
        cid, hv, tq = p[6 + 3 * i], p[7 + 3 * i], p[8 + 3 * i]
        h, v = hv >> 4, hv & 0x0F
        if h not in (1, 2) or v not in (1, 2):
            raise UnsupportedSampling(
                f"sampling factors {h}x{v} for component {cid} "
                "(each factor must be 1 or 2)", offset=seg.offset)
        if tq > 3:
            raise MalformedSegment(f"quantization table id {tq}", offset=seg.offset)
        comps.append((cid, h, v, tq))
    return (width or None), (height or None), comps


def _parse_dht(seg: MarkerSegment, dc, ac) -> None:
    p, i = seg.payload, 0
    while i < len(p):
        if i + 17 > len(p):
            raise MalformedSegment("Huffman table header truncated", offset=seg.offset)
        tc, th = p[i] >> 4, p[i] & 0x0F
        if tc > 1 or th > 3:
            raise MalformedSegment(
                f"Huffman table class {tc} id {th}", offset=seg.offset)
        counts = tuple(p[i + 1:i + 17])
        total = sum(counts)
        if total == 0 or total > 256 or i + 17 + total > len(p):
            raise MalformedSegment("Huffman symbol list truncated", offset=seg.offset)
        symbols = tuple(p[i + 17:i + 17 + total])
        # Reject tables whose canonical codes would not fit their bit lengths.
        code = 0
        for length, count in enumerate(counts, start=1):
            code += count
            if code > (1 << length):
                raise MalformedSegment("over-subscribed Huffman table", offset=seg.offset)
            code <<= 1
        (dc if tc == 0 else ac)[th] = HuffmanSpec(counts, symbols)
        i += 17 + total


def _parse_dqt(seg: MarkerSegment, quant) -> None:
    p, i = seg.payload, 0
    while i < len(p):
        pq, tq = p[i] >> 4, p[i] & 0x0F
        if pq > 1 or tq > 3:
            raise MalformedSegment(f"quantization precision {pq} id {tq}", offset=seg.offset)
        step = 1 + 64 * (pq + 1)
        if i + step > len(p):
            raise MalformedSegment("quantization table truncated", offset=seg.offset)
        if pq == 0:
            entries = tuple(p[i + 1:i + 65])
        else:
            entries = tuple(_read_u16(p, i + 1 + 2 * k) for k in range(64))
        if any(e < 1 for e in entries):
            raise MalformedSegment("quantization entry 0 is invalid", offset=seg.offset)
        quant[tq] = entries
        i += step


def parse_stream(data: bytes) -> DecodeContext:
    """Parse a baseline JPEG byte stream into a :class:`DecodeContext`.

    Accepts SOF0 and SOF1 frames (identical decoding at 8-bit precision) and
    exactly one interleaved scan.  APPn and COM segments are skipped.  The
    declared dimensions are recorded only when their SOF fields are nonzero,
    so headers with zeroed dimensions still parse.
    """
    segments, spans = scan_segments(data)

    dc: list[HuffmanSpec | None] = [None] * 4
    ac: list[HuffmanSpec | None] = [None] * 4
    quant: list[tuple[int, ...] | None] = [None] * 4
    restart = 0
    sof = None
    sos_seg = None

    for seg in segments:
        m = seg.marker
        if m in (SOI, EOI) or m == TEM:
            continue
        if m in RST_RANGE:
            raise MalformedSegment("restart marker outside scan data", offset=seg.offset)
        if m == SOS:
            if sos_seg is not None:
                raise UnsupportedMarker(
                    "multiple scans (progressive or multi-scan sequential)",
                    offset=seg.offset)
            if sof is None:
                raise MalformedSegment("SOS before frame header", offset=seg.offset)
            sos_seg = seg
            continue
        if m in (SOF0, SOF1):
            if sof is not None:
                raise MalformedSegment("multiple frame headers", offset=seg.offset)
            sof = _parse_sof(seg)
        elif m in SOF_RANGE and m not in (DHT, DAC):
            raise UnsupportedMarker(
                f"{marker_name(m)} (only baseline sequential is supported)",
                offset=seg.offset)
        elif m == DAC:
            raise UnsupportedMarker("arithmetic coding conditioning (DAC)", offset=seg.offset)
        elif m == DHT:
            _parse_dht(seg, dc, ac)
        elif m == DQT:
            _parse_dqt(seg, quant)
        elif m == DRI:
            if len(seg.payload) != 2:
                raise MalformedSegment("DRI payload must be 2 bytes", offset=seg.offset)
            restart = _read_u16(seg.payload, 0)
        # APPn, COM, DNL and other length-bearing markers are skipped.

    if sos_seg is None or sof is None:
        raise MalformedSegment("no scan found (missing SOS)")

    width, height, sof_comps = sof
    p = sos_seg.payload
    if len(p) < 1 or len(p) != 1 + 2 * p[0] + 3:
        raise MalformedSegment("scan header length mismatch", offset=sos_seg.offset)
    if p[0] != len(sof_comps):
        raise UnsupportedMarker(
            "scan does not interleave all frame components "
            "(non-interleaved scans are not supported)", offset=sos_seg.offset)

    table_refs = {}
    for i in range(p[0]):
        cs, tda = p[1 + 2 * i], p[2 + 2 * i]
        table_refs[cs] = (tda >> 4, tda & 0x0F)

    components = []
    for cid, h, v, tq in sof_comps:
        if cid not in table_refs:
            raise MalformedSegment(
                f"scan references unknown component id {cid}", offset=sos_seg.offset)
        td, ta = table_refs[cid]
        components.append(ComponentSpec(cid, h, v, tq, td, ta))

    missing = []
    for c in components:
        if quant[c.quant_table_id] is None:
            missing.append(f"DQT {c.quant_table_id}")
        if dc[c.dc_table_id] is None:
            missing.append(f"DC DHT {c.dc_table_id}")
        if ac[c.ac_table_id] is None:
            missing.append(f"AC DHT {c.ac_table_id}")
    if missing:
        raise UnresolvedTableReference(
            "tables referenced but never defined: " + ", ".join(sorted(set(missing))))

    start, end = spans[0]
    return DecodeContext(
        components=components,
        dc_tables=dc,
        ac_tables=ac,
        quant_tables=quant,
        restart_interval=restart,
        declared_width=width,
        declared_height=height,
        scan_data=bytes(data[start:end]),
        scan_offset=start,
    )


def strip_dimensions(data: bytes) -> bytes:
    """Return a copy of ``data`` with the SOF width and height fields zeroed.

    Every other byte is untouched, so output length equals input length and
    the operation is idempotent.
    """
    parse_stream(data)   # validates the precondition: a decodable frame
    segments, _ = scan_segments(data)
    out = bytearray(data)
    for seg in segments:
        if seg.marker in (SOF0, SOF1):
            # marker(2) + length(2) + precision(1), then height(2) width(2)
            base = seg.offset + 5
            out[base:base + 4] = b"\x00\x00\x00\x00"
            break
    return bytes(out)
