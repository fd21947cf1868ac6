"""Binary PGM images, payload files and seeded random payloads."""

from __future__ import annotations

import os
import re
import tempfile
from pathlib import Path

import numpy as np

from .errors import FormatError
from .image import GrayImage

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def parse_pgm(data: bytes) -> GrayImage:
    """Decode a binary (P5) PGM with maxval 255; header comments are skipped."""
    fields = []
    pos = 0
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise FormatError("truncated PGM header")
        fields.append(m.group(1))
        pos = m.end()
    magic, *nums = fields
    if magic != b"P5":
        raise FormatError(f"not a binary PGM (magic {magic!r})")
    try:
        width, height, maxval = (int(x) for x in nums)
    except ValueError as exc:
        raise FormatError(f"bad PGM header values {nums!r}") from exc
    if maxval != 255:
        raise FormatError(f"only maxval 255 is supported, got {maxval}")
    if pos >= len(data) or data[pos:pos + 1] not in (b" ", b"\t", b"\n", b"\r"):
        raise FormatError("PGM header must end with a single whitespace byte")
    raster = data[pos + 1:]
    if len(raster) != width * height:
        raise FormatError(f"PGM declares {width}x{height} but holds {len(raster)} pixel bytes")
    return GrayImage(np.frombuffer(raster, dtype=np.uint8).reshape(height, width))


def format_pgm(img: GrayImage) -> bytes:
    return b"P5\n%d %d\n255\n" % (img.width, img.height) + img.pixels.tobytes()


def read_pgm(path) -> GrayImage:
    return parse_pgm(Path(path).read_bytes())


def atomic_write(path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_pgm(path, img: GrayImage) -> None:
    atomic_write(path, format_pgm(img))


def bytes_to_bits(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def bits_to_bytes(bits) -> bytes:
    """Pack MSB first; a partial final byte is zero padded."""
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def random_bits(n: int, seed: int) -> np.ndarray:
    """``n`` payload bits from numpy's PCG64 generator, reproducible across machines."""
    return np.random.default_rng(seed).integers(0, 2, size=n, dtype=np.uint8)
