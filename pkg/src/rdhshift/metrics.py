"""Distortion measures and the invalid-shift (ISP) experiments."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np

from .codec import EmbedStats
from .errors import CapacityError, FormatError
from .histogram import ErrorHistogram, select_peaks_zeros
from .image import GrayImage
from .locmap import preprocess
from .predictor import predict_map

Region = Tuple[int, int, int, int]  # top, left, height, width


def _check_dims(a: GrayImage, b: GrayImage) -> None:
    if a.shape != b.shape:
        raise FormatError(f"image dimensions differ: {a.shape} vs {b.shape}")


def mse(a: GrayImage, b: GrayImage) -> float:
    _check_dims(a, b)
    diff = a.to_array() - b.to_array()
    return int((diff * diff).sum()) / a.size


def psnr_from_mse(value: float) -> float:
    if value == 0:
        return math.inf
    return 10 * math.log10(255 ** 2 / value)


def psnr(a: GrayImage, b: GrayImage) -> float:
    return psnr_from_mse(mse(a, b))


def mse_decomposition(stats: EmbedStats, dims: Tuple[int, int]) -> Tuple[float, float]:
    """(MSE from bit-carrying changes, MSE from invalid shifts); every change is one level."""
    n = dims[0] * dims[1]
    return stats.valid_shift_count / n, stats.isp_count / n


def format_db(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr: float
    mse_vs_preprocessed: float
    psnr_vs_preprocessed: float
    valid_shift_count: int
    isp_count: int
    payload_bits: int
    bpp: float
    capacity_bits: Optional[int] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["psnr"] = format_db(self.psnr)
        d["psnr_vs_preprocessed"] = format_db(self.psnr_vs_preprocessed)
        return d

    def to_text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.to_dict().items())


def quality_report(
    cover: GrayImage,
    stego: GrayImage,
    stats: EmbedStats,
    payload_bits: int,
    preprocessed: Optional[GrayImage] = None,
    capacity_bits: Optional[int] = None,
) -> QualityReport:
    if preprocessed is None:
        preprocessed, _ = preprocess(cover)
    m = mse(cover, stego)
    mp = mse(preprocessed, stego)
    return QualityReport(
        mse=m,
        psnr=psnr_from_mse(m),
        mse_vs_preprocessed=mp,
        psnr_vs_preprocessed=psnr_from_mse(mp),
        valid_shift_count=stats.valid_shift_count,
        isp_count=stats.isp_count,
        payload_bits=payload_bits,
        bpp=payload_bits / cover.size,
        capacity_bits=capacity_bits,
    )


def region_isp(block: GrayImage, payload_bits: int) -> int:
    """ISPs caused by embedding ``payload_bits`` bits into one region's own histogram.

    Every interior pixel of the block is predicted from the unmarked block,
    a single double-peak pair is chosen from their joint histogram and the
    pixels are visited in raster order until the payload is placed. The count
    does not depend on the bit values, only on how many there are.
    """
    pre, _ = preprocess(block)
    p = pre.to_array()
    errors = (p[1:-1, 1:-1] - predict_map(p)).ravel()
    params = select_peaks_zeros(ErrorHistogram.from_errors(errors))
    carriers = np.flatnonzero((errors == params.lo) | (errors == params.hi))
    if payload_bits > carriers.size:
        raise CapacityError(f"region holds {carriers.size} bits, {payload_bits} requested")
    if payload_bits == 0:
        return 0
    visited = errors[: carriers[payload_bits - 1] + 1]
    shifted = ((visited > params.hi) & (visited < params.z2)) | ((visited < params.lo) & (visited > params.z1))
    return int(shifted.sum())


def block_isp_experiment(img: GrayImage, block_a: Region, block_b: Region, payload_bits: int) -> Tuple[int, int]:
    if block_a[2:] != block_b[2:]:
        raise FormatError("blocks must have the same size")
    return region_isp(img.crop(*block_a), payload_bits), region_isp(img.crop(*block_b), payload_bits)
