"""Curve-ordered bulk loading of point blocks and block-level queries.

Points live in [0,1)^d as exact fixed-point values.  bulk_load sorts them
along a curve, packs each consecutive run of B points into a block and
keeps the block's minimal bounding box over the real point coordinates.
Queries test bounding boxes only, mirroring how an index structure decides
which blocks to fetch; smaller boxes mean fewer fetches.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .construction import CurveSpec
from .errors import CoordinateOutOfRange, ParseError
from .order import FixedPoint, sort_points

# CSV decimals are truncated to this many fractional bits; binary files
# store exactly this width.
POINT_PRECISION = 64

CSV_FORMAT = "csv"
BINARY_FORMAT = "binary"


@dataclass(frozen=True)
class PointRecord:
    """A point with an opaque identifier (its ingestion index by default)."""

    id: int
    coords: FixedPoint


@dataclass(frozen=True)
class Block:
    """Up to B points stored together, with the minimal axis-aligned box
    around their coordinates (inclusive, exact rationals)."""

    ids: tuple[int, ...]
    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]

    @property
    def size(self) -> int:
        return len(self.ids)

    @property
    def volume(self) -> Fraction:
        v = Fraction(1)
        for a, b in zip(self.lo, self.hi):
            v *= b - a
        return v


def _decimal_of_dyadic(value: Fraction) -> str:
    """Exact decimal representation of a dyadic rational in [0,1)."""
    num, den = value.numerator, value.denominator
    if num == 0:
        return "0"
    m = den.bit_length() - 1
    digits = str(num * 5 ** m).rjust(m, "0").rstrip("0")
    return "0." + (digits or "0")


def _parse_decimal(token: str, line: int) -> Fraction:
    try:
        v = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad coordinate {token!r}", line=line) from None
    if not 0 <= v < 1:
        raise CoordinateOutOfRange(f"coordinate {v} outside [0,1) (line {line})")
    return v


def _open_maybe(source, mode: str):
    if isinstance(source, (str, Path)):
        return open(source, mode), True
    return source, False


def load_points(source, format: str = CSV_FORMAT) -> list[PointRecord]:
    """Read points from a path or open file.

    CSV: one point per line, comma-separated decimal coordinates, ``#``
    starts a comment.  Binary: little-endian u32 dimension, u64 count, then
    count*dimension u64 fixed-point values (the 64 bits after the radix
    point).
    """
    if format == CSV_FORMAT:
        fh, close = _open_maybe(source, "r")
        try:
            records: list[PointRecord] = []
            d = None
            for lineno, raw in enumerate(fh, start=1):
                text = raw.split("#", 1)[0].strip()
                if not text:
                    continue
                tokens = [t.strip() for t in text.split(",")]
                values = [_parse_decimal(t, lineno) for t in tokens]
                if d is None:
                    d = len(values)
                elif len(values) != d:
                    raise ParseError(
                        f"point has {len(values)} coordinates; expected {d}", line=lineno)
                coords = FixedPoint.from_fractions(values, POINT_PRECISION)
                records.append(PointRecord(len(records), coords))
            return records
        finally:
            if close:
                fh.close()
    if format == BINARY_FORMAT:
        fh, close = _open_maybe(source, "rb")
        try:
            header = fh.read(12)
            if len(header) < 12:
                if len(header) == 0:
                    return []
                raise ParseError("truncated binary header", offset=len(header))
            d, n = struct.unpack("<IQ", header)
            records = []
            for idx in range(n):
                raw = fh.read(8 * d)
                if len(raw) != 8 * d:
                    raise ParseError("truncated binary point data", offset=12 + idx * 8 * d)
                coords = struct.unpack(f"<{d}Q", raw)
                records.append(PointRecord(idx, FixedPoint(coords, POINT_PRECISION)))
            return records
        finally:
            if close:
                fh.close()
    raise ParseError(f"unknown point format {format!r}")


def write_points(records: Sequence[PointRecord], dest, format: str = CSV_FORMAT) -> None:
    """Write points in either on-disk format (see load_points)."""
    if format == CSV_FORMAT:
        fh, close = _open_maybe(dest, "w")
        try:
            for rec in records:
                fh.write(",".join(
                    _decimal_of_dyadic(rec.coords.value(j))
                    for j in range(1, rec.coords.dim + 1)) + "\n")
        finally:
            if close:
                fh.close()
        return
    if format == BINARY_FORMAT:
        fh, close = _open_maybe(dest, "wb")
        try:
            d = records[0].coords.dim if records else 0
            fh.write(struct.pack("<IQ", d, len(records)))
            for rec in records:
                coords = rec.coords
                if coords.precision != POINT_PRECISION:
                    coords = coords.widen(POINT_PRECISION)
                fh.write(struct.pack(f"<{d}Q", *coords.coords))
        finally:
            if close:
                fh.close()
        return
    raise ParseError(f"unknown point format {format!r}")


def bulk_load(records: Sequence[PointRecord], B: int, spec: CurveSpec) -> list[Block]:
    """Sort the points along the curve and pack each next group of B into a
    block with its minimal bounding box.  Ties (duplicate points) keep
    ingestion order, so the result is deterministic."""
    if B < 1:
        raise ValueError("block capacity must be >= 1")
    order = sort_points([r.coords for r in records], spec)
    blocks: list[Block] = []
    for start in range(0, len(order), B):
        group = [records[i] for i in order[start:start + B]]
        d = group[0].coords.dim
        lo = []
        hi = []
        for j in range(1, d + 1):
            vals = [g.coords.value(j) for g in group]
            lo.append(min(vals))
            hi.append(max(vals))
        blocks.append(Block(tuple(g.id for g in group), tuple(lo), tuple(hi)))
    return blocks


def query_box(blocks: Sequence[Block], lo: Sequence, hi: Sequence) -> list[int]:
    """Indices of blocks whose bounding box intersects the query box
    (boundaries inclusive)."""
    qlo = [Fraction(x) for x in lo]
    qhi = [Fraction(x) for x in hi]
    hits = []
    for idx, b in enumerate(blocks):
        if all(ql <= bh and bl <= qh
               for ql, qh, bl, bh in zip(qlo, qhi, b.lo, b.hi)):
            hits.append(idx)
    return hits


def query_sphere(blocks: Sequence[Block], center: Sequence, radius) -> list[int]:
    """Indices of blocks whose bounding box lies within the given distance
    of the center (squared-distance test, exact)."""
    c = [Fraction(x) for x in center]
    r = Fraction(radius)
    if r < 0:
        raise ValueError("radius must be >= 0")
    r2 = r * r
    hits = []
    for idx, b in enumerate(blocks):
        dist2 = Fraction(0)
        for cj, bl, bh in zip(c, b.lo, b.hi):
            if cj < bl:
                dist2 += (bl - cj) ** 2
            elif cj > bh:
                dist2 += (cj - bh) ** 2
        if dist2 <= r2:
            hits.append(idx)
    return hits


@dataclass(frozen=True)
class BlockStats:
    count: int
    total_volume: float
    mean_volume: float
    max_volume: float
    max_bcr_proxy: float


def block_stats(blocks: Sequence[Block]) -> BlockStats:
    """Aggregate bounding-box volumes.

    The BCR proxy of a block is its box volume divided by the fraction of
    all points it holds (size / total), i.e. the factor by which the block
    over-covers space relative to a perfectly even partition of the unit
    cube.
    """
    if not blocks:
        return BlockStats(0, 0.0, 0.0, 0.0, 0.0)
    total_points = sum(b.size for b in blocks)
    volumes = [b.volume for b in blocks]
    total = sum(volumes, Fraction(0))
    proxies = [v * total_points / b.size for v, b in zip(volumes, blocks)]
    return BlockStats(
        count=len(blocks),
        total_volume=float(total),
        mean_volume=float(total / len(blocks)),
        max_volume=float(max(volumes)),
        max_bcr_proxy=float(max(proxies)),
    )
