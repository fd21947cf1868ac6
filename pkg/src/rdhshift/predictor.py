"""Adaptive weighted four-neighbour prediction.

Each neighbour is weighted by 1 / (1 + |mean - neighbour|), normalised to sum
to one. The weighted sum is evaluated exactly and floored once, so embedder and
extractor agree bit for bit on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .image import Coord, GrayImage, ParitySet, coord_arrays, require_interior


@dataclass(frozen=True)
class NeighborWeights:
    up: Fraction
    down: Fraction
    left: Fraction
    right: Fraction

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.up, self.down, self.left, self.right)


def _neighbors(img: GrayImage, c: Coord) -> tuple[int, int, int, int]:
    require_interior(c, img.shape)
    u, v = c
    return img[u - 1, v], img[u + 1, v], img[u, v - 1], img[u, v + 1]


def neighbor_mean(img: GrayImage, c: Coord) -> int:
    return sum(_neighbors(img, c)) // 4


def weights(img: GrayImage, c: Coord) -> NeighborWeights:
    nb = _neighbors(img, c)
    mean = sum(nb) // 4
    dev = [abs(mean - x) for x in nb]
    total = sum(dev)
    if total == 0:
        return NeighborWeights(*(Fraction(1, 4),) * 4)
    raw = [Fraction(total, 1 + d) for d in dev]
    norm = sum(raw)
    return NeighborWeights(*(r / norm for r in raw))


def predict(img: GrayImage, c: Coord) -> int:
    nb = _neighbors(img, c)
    w = weights(img, c).as_tuple()
    acc = sum(wi * x for wi, x in zip(w, nb))
    return acc.numerator // acc.denominator


def prediction_error(img: GrayImage, c: Coord) -> int:
    return img[c] - predict(img, c)


def predict_map(pixels: np.ndarray) -> np.ndarray:
    """Predicted value of every interior pixel, shape ``(h - 2, w - 2)``.

    With d_i = 1 + |mean - x_i| the normalised weights are
    prod_{j != i} d_j / sum_k prod_{j != k} d_j; every term stays below 2**34.
    """
    p = np.asarray(pixels, dtype=np.int64)
    nb = (p[:-2, 1:-1], p[2:, 1:-1], p[1:-1, :-2], p[1:-1, 2:])
    mean = (nb[0] + nb[1] + nb[2] + nb[3]) // 4
    d = [1 + np.abs(mean - x) for x in nb]
    q = (d[1] * d[2] * d[3], d[0] * d[2] * d[3], d[0] * d[1] * d[3], d[0] * d[1] * d[2])
    num = q[0] * nb[0] + q[1] * nb[1] + q[2] * nb[2] + q[3] * nb[3]
    den = q[0] + q[1] + q[2] + q[3]
    return num // den


def predictions(img: GrayImage, s: ParitySet) -> np.ndarray:
    """Predicted values of the processable coordinates of ``s``, raster ordered."""
    rows, cols = coord_arrays(img.shape, s)
    return predict_map(img.pixels)[rows - 1, cols - 1]


def prediction_errors(img: GrayImage, s: ParitySet) -> np.ndarray:
    rows, cols = coord_arrays(img.shape, s)
    return img.pixels[rows, cols].astype(np.int64) - predictions(img, s)
