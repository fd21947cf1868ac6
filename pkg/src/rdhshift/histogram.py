"""Prediction-error histograms and double peak / zero point selection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import CapacityError
from .image import GrayImage, ParitySet
from .predictor import prediction_errors

E_MIN = -255
E_MAX = 255
N_BINS = E_MAX - E_MIN + 1


@dataclass(frozen=True, eq=False)
class ErrorHistogram:
    """Counts of prediction errors over the bins -255..255."""

    counts: np.ndarray

    @classmethod
    def from_errors(cls, errors: Iterable[int]) -> "ErrorHistogram":
        e = np.asarray(list(errors) if not isinstance(errors, np.ndarray) else errors, dtype=np.int64)
        if e.size and (e.min() < E_MIN or e.max() > E_MAX):
            raise ValueError("prediction errors must lie in [-255, 255]")
        return cls(np.bincount(e - E_MIN, minlength=N_BINS).astype(np.int64))

    @classmethod
    def from_mapping(cls, counts: Mapping[int, int]) -> "ErrorHistogram":
        arr = np.zeros(N_BINS, dtype=np.int64)
        for b, n in counts.items():
            if n < 0:
                raise ValueError("histogram counts must be non-negative")
            arr[b - E_MIN] = n
        return cls(arr)

    def __getitem__(self, b: int) -> int:
        if not E_MIN <= b <= E_MAX:
            return 0
        return int(self.counts[b - E_MIN])

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def as_dict(self) -> dict[int, int]:
        return {int(i) + E_MIN: int(n) for i, n in enumerate(self.counts) if n}


@dataclass(frozen=True)
class PeakZeroParams:
    pk1: int
    pk2: int
    z1: int
    z2: int

    @property
    def lo(self) -> int:
        return min(self.pk1, self.pk2)

    @property
    def hi(self) -> int:
        return max(self.pk1, self.pk2)


def build_peh(img: GrayImage, s: ParitySet) -> ErrorHistogram:
    return ErrorHistogram.from_errors(prediction_errors(img, s))


def select_peaks_zeros(h: ErrorHistogram) -> PeakZeroParams:
    """Two most populated bins and the nearest empty bins flanking them.

    Equal counts prefer the bin closer to zero, then the smaller bin.
    """
    nonzero = [(int(n), b) for b, n in h.as_dict().items()]
    if len(nonzero) < 2:
        raise CapacityError("prediction-error histogram has fewer than two populated bins")
    nonzero.sort(key=lambda nb: (-nb[0], abs(nb[1]), nb[1]))
    pk1, pk2 = nonzero[0][1], nonzero[1][1]
    lo, hi = min(pk1, pk2), max(pk1, pk2)
    z1 = next((b for b in range(lo - 1, E_MIN - 1, -1) if h[b] == 0), None)
    z2 = next((b for b in range(hi + 1, E_MAX + 1) if h[b] == 0), None)
    if z1 is None or z2 is None:
        raise CapacityError("no empty histogram bin flanks the peaks")
    return PeakZeroParams(pk1, pk2, z1, z2)


def peak_capacity(h: ErrorHistogram, params: PeakZeroParams) -> int:
    return h[params.pk1] + h[params.pk2]
