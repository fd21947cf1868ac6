"""Overflow/underflow preprocessing and the location map that undoes it.

The map holds one bit per interior pixel whose preprocessed value is 1 or 254,
in raster order: 1 if that pixel was pushed in from 0 or 255, 0 if it already
held that value. Those are the only ambiguous values once the cover has been
recovered, since embedding moves each pixel by at most one level.

``rle-v1`` byte layout: LEB128 varint bit count, then (for a non-empty map)
one byte holding the first bit, then varint lengths of alternating runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CorruptStegoError, FormatError
from .image import GrayImage

ENCODING = "rle-v1"


@dataclass(frozen=True, eq=False)
class LocationMap:
    bits: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.bits, dtype=np.uint8).ravel()
        if arr.size and arr.max() > 1:
            raise ValueError("location map bits must be 0 or 1")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    def __len__(self) -> int:
        return int(self.bits.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocationMap):
            return NotImplemented
        return bool(np.array_equal(self.bits, other.bits))

    __hash__ = None

    def compress(self) -> bytes:
        return rle_encode(self.bits)

    @classmethod
    def decompress(cls, data: bytes) -> "LocationMap":
        return cls(rle_decode(data))


def _interior(a: np.ndarray) -> np.ndarray:
    return a[1:-1, 1:-1]


def preprocess(img: GrayImage) -> tuple[GrayImage, LocationMap]:
    p = img.to_array()
    inner = _interior(p)
    candidates = (inner == 0) | (inner == 1) | (inner == 254) | (inner == 255)
    flags = (inner[candidates] == 0) | (inner[candidates] == 255)
    inner[inner == 0] = 1
    inner[inner == 255] = 254
    return GrayImage(p), LocationMap(flags.astype(np.uint8))


def postprocess(img: GrayImage, locmap: LocationMap) -> GrayImage:
    p = img.to_array()
    inner = _interior(p)
    rows, cols = np.nonzero((inner == 1) | (inner == 254))
    if rows.size != len(locmap):
        raise CorruptStegoError(
            f"location map has {len(locmap)} bits but the recovered image has {rows.size} candidates"
        )
    marked = locmap.bits.astype(bool)
    r, c = rows[marked], cols[marked]
    inner[r, c] = np.where(inner[r, c] == 1, 0, 255)
    return GrayImage(p)


def _put_varint(out: bytearray, n: int) -> None:
    while True:
        byte = n & 0x7F
        n >>= 7
        if n:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _get_varint(data: bytes, pos: int) -> tuple[int, int]:
    n = shift = 0
    while True:
        if pos >= len(data):
            raise FormatError("truncated varint in location map")
        byte = data[pos]
        pos += 1
        n |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return n, pos
        shift += 7
        if shift > 63:
            raise FormatError("varint too long in location map")


def rle_encode(bits) -> bytes:
    b = np.asarray(bits, dtype=np.uint8).ravel()
    out = bytearray()
    _put_varint(out, int(b.size))
    if b.size == 0:
        return bytes(out)
    out.append(int(b[0]))
    edges = np.flatnonzero(np.diff(b)) + 1
    bounds = np.concatenate(([0], edges, [b.size]))
    for run in np.diff(bounds):
        _put_varint(out, int(run))
    return bytes(out)


def rle_decode(data: bytes) -> np.ndarray:
    n, pos = _get_varint(data, 0)
    if n == 0:
        if pos != len(data):
            raise FormatError("trailing bytes after empty location map")
        return np.zeros(0, dtype=np.uint8)
    if pos >= len(data) or data[pos] > 1:
        raise FormatError("invalid first-bit byte in location map")
    bit = data[pos]
    pos += 1
    runs, values = [], []
    total = 0
    while total < n:
        run, pos = _get_varint(data, pos)
        if run == 0:
            raise FormatError("zero-length run in location map")
        runs.append(run)
        values.append(bit)
        total += run
        bit ^= 1
    if total != n or pos != len(data):
        raise FormatError("location map runs do not match its declared length")
    return np.repeat(np.array(values, dtype=np.uint8), runs)
