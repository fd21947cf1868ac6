"""Local complexity, fluctuation and the smooth-first embedding order.

A pixel's complexity reads only its four cross neighbours, which belong to the
opposite checkerboard set; its fluctuation adds the mean complexity of its
diagonal (same-set) neighbours. Both therefore depend on opposite-set pixels
and the border alone, so embedding into one set never perturbs that set's own
ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import Coord, GrayImage, ParitySet, coord_arrays, has_cross_neighbors, require_interior

DIAGONALS = ((-1, -1), (-1, 1), (1, -1), (1, 1))


@dataclass(frozen=True, order=True)
class FluctuationRecord:
    fluctuation: int
    raster_index: int
    coord: Coord


def local_complexity(img: GrayImage, c: Coord) -> int:
    require_interior(c, img.shape)
    u, v = c
    a = img[u - 1, v]
    b = img[u, v - 1]
    cc = img[u, v + 1]
    d = img[u + 1, v]
    return abs(a - d) + abs(b - cc) + abs(a + cc - b - d) + abs(cc + d - a - b)


def combine_fluctuation(own: int, neighbours: list[int]) -> int:
    """Own complexity plus the floored mean of the diagonal neighbours' complexities."""
    if not neighbours:
        return own
    return own + sum(neighbours) // len(neighbours)


def fluctuation(img: GrayImage, c: Coord) -> int:
    u, v = c
    diag = [
        local_complexity(img, (u + du, v + dv))
        for du, dv in DIAGONALS
        if has_cross_neighbors((u + du, v + dv), img.shape)
    ]
    return combine_fluctuation(local_complexity(img, c), diag)


def complexity_map(pixels: np.ndarray) -> np.ndarray:
    """Complexity of every interior pixel, shape ``(h - 2, w - 2)``."""
    p = np.asarray(pixels, dtype=np.int64)
    a = p[:-2, 1:-1]
    b = p[1:-1, :-2]
    c = p[1:-1, 2:]
    d = p[2:, 1:-1]
    return np.abs(a - d) + np.abs(b - c) + np.abs(a + c - b - d) + np.abs(c + d - a - b)


def fluctuation_map(pixels: np.ndarray) -> np.ndarray:
    """Fluctuation of every interior pixel, shape ``(h - 2, w - 2)``."""
    omega = complexity_map(pixels)
    ih, iw = omega.shape
    padded = np.zeros((ih + 2, iw + 2), dtype=np.int64)
    valid = np.zeros((ih + 2, iw + 2), dtype=np.int64)
    padded[1:-1, 1:-1] = omega
    valid[1:-1, 1:-1] = 1
    total = np.zeros_like(omega)
    count = np.zeros_like(omega)
    for du, dv in DIAGONALS:
        total += padded[1 + du:1 + du + ih, 1 + dv:1 + dv + iw]
        count += valid[1 + du:1 + du + ih, 1 + dv:1 + dv + iw]
    mean = np.where(count > 0, total // np.maximum(count, 1), 0)
    return omega + mean


def fluctuation_values(img: GrayImage, s: ParitySet) -> np.ndarray:
    """Fluctuations of the processable coordinates of ``s``, in raster order."""
    rows, cols = coord_arrays(img.shape, s)
    return fluctuation_map(img.pixels)[rows - 1, cols - 1]


def fluctuation_permutation(img: GrayImage, s: ParitySet) -> np.ndarray:
    """Raster indices of ``s`` sorted by ascending fluctuation, ties by raster index."""
    return np.argsort(fluctuation_values(img, s), kind="stable")


def fluctuation_order(img: GrayImage, s: ParitySet) -> list[FluctuationRecord]:
    rows, cols = coord_arrays(img.shape, s)
    values = fluctuation_values(img, s)
    return [
        FluctuationRecord(int(values[i]), int(i), (int(rows[i]), int(cols[i])))
        for i in np.argsort(values, kind="stable")
    ]
