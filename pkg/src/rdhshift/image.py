"""Grayscale image container, checkerboard partition and interior classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from .errors import BoundsError, FormatError

MIN_SIDE = 5

Coord = Tuple[int, int]


class ParitySet(enum.Enum):
    """Checkerboard sub-image. A holds even (u+v), B holds odd (u+v)."""

    A = 0
    B = 1

    @property
    def other(self) -> "ParitySet":
        return ParitySet.B if self is ParitySet.A else ParitySet.A


PARITY_CONVENTION = "A-even"


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Immutable 8-bit grayscale image, indexed ``pixels[u, v]`` (row, column)."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise FormatError(f"expected a 2-D pixel array, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise FormatError("pixel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        h, w = arr.shape
        if h < MIN_SIDE or w < MIN_SIDE:
            raise FormatError(f"image must be at least {MIN_SIDE}x{MIN_SIDE}, got {w}x{h}")
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_rows(cls, rows) -> "GrayImage":
        return cls(np.array(rows, dtype=np.int64))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.pixels.shape

    @property
    def size(self) -> int:
        return self.pixels.size

    def __getitem__(self, c: Coord) -> int:
        u, v = c
        if not (0 <= u < self.height and 0 <= v < self.width):
            raise BoundsError(f"coordinate {c} outside {self.height}x{self.width} image")
        return int(self.pixels[u, v])

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    __hash__ = None

    def to_array(self) -> np.ndarray:
        """Writable int64 copy, convenient for arithmetic."""
        return self.pixels.astype(np.int64)

    def crop(self, top: int, left: int, height: int, width: int) -> "GrayImage":
        if top < 0 or left < 0 or top + height > self.height or left + width > self.width:
            raise BoundsError(f"region ({top}, {left}, {height}, {width}) outside image")
        return GrayImage(self.pixels[top:top + height, left:left + width])


def parity_of(c: Coord, dims: Tuple[int, int] | None = None) -> ParitySet:
    """Checkerboard set of ``c``; ``dims`` is ``(height, width)`` when bounds should be checked."""
    u, v = c
    if dims is not None:
        h, w = dims
        if not (0 <= u < h and 0 <= v < w):
            raise BoundsError(f"coordinate {c} outside {h}x{w} image")
    return ParitySet.A if (u + v) % 2 == 0 else ParitySet.B


def has_cross_neighbors(c: Coord, dims: Tuple[int, int]) -> bool:
    u, v = c
    h, w = dims
    return 1 <= u <= h - 2 and 1 <= v <= w - 2


def require_interior(c: Coord, dims: Tuple[int, int]) -> None:
    if not has_cross_neighbors(c, dims):
        raise BoundsError(f"coordinate {c} has no full cross neighbourhood in a {dims[0]}x{dims[1]} image")


@lru_cache(maxsize=64)
def _coord_arrays(h: int, w: int, parity: int) -> Tuple[np.ndarray, np.ndarray]:
    uu, vv = np.mgrid[1:h - 1, 1:w - 1]
    mask = (uu + vv) % 2 == parity
    rows, cols = uu[mask], vv[mask]
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def coord_arrays(dims: Tuple[int, int], s: ParitySet) -> Tuple[np.ndarray, np.ndarray]:
    """Row and column index arrays of the processable coordinates of ``s``, raster ordered."""
    h, w = dims
    return _coord_arrays(h, w, s.value)


def processable_coords(img: GrayImage, s: ParitySet) -> list[Coord]:
    rows, cols = coord_arrays(img.shape, s)
    return [(int(u), int(v)) for u, v in zip(rows, cols)]


def border_mask(dims: Tuple[int, int]) -> np.ndarray:
    h, w = dims
    mask = np.ones((h, w), dtype=bool)
    mask[1:h - 1, 1:w - 1] = False
    return mask
