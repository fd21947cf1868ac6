"""Double-peak histogram-shift embedding and extraction over the checkerboard sets.

Set A is embedded first on the preprocessed cover, then set B on the A-marked
image; extraction runs B then A. Within a set, pixels are visited in ascending
fluctuation order (or raster order for the baseline) and embedding stops right
after the last payload bit, so smooth pixels absorb the payload and as few
rough pixels as possible are shifted without carrying data.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityError, CorruptStegoError, FormatError
from .histogram import ErrorHistogram, PeakZeroParams, peak_capacity, select_peaks_zeros
from .image import GrayImage, ParitySet, coord_arrays
from .locmap import postprocess, preprocess
from .metadata import SetSideInfo, StegoMetadata
from .predictor import predictions
from .texture import fluctuation_permutation

log = logging.getLogger(__name__)


class OrderMode(str, enum.Enum):
    FLUCTUATION = "fluctuation"
    RASTER = "raster"


class Action(enum.Enum):
    EMBEDDED = "embedded"
    SHIFTED = "shifted"
    NONE = "none"


@dataclass(frozen=True)
class EmbedStats:
    valid_shift_count: int = 0
    isp_count: int = 0
    unchanged_count: int = 0

    def __add__(self, other: "EmbedStats") -> "EmbedStats":
        return EmbedStats(
            self.valid_shift_count + other.valid_shift_count,
            self.isp_count + other.isp_count,
            self.unchanged_count + other.unchanged_count,
        )

    @property
    def visited(self) -> int:
        return self.valid_shift_count + self.isp_count + self.unchanged_count


@dataclass(frozen=True)
class EmbedResult:
    stego: GrayImage
    meta: StegoMetadata
    stats: EmbedStats
    preprocessed: GrayImage


def as_bits(bits) -> np.ndarray:
    b = np.asarray(bits if bits is not None else [], dtype=np.int64).ravel()
    if b.size and (b.min() < 0 or b.max() > 1):
        raise ValueError("payload bits must be 0 or 1")
    return b.astype(np.uint8)


def modify_error(e: int, params: PeakZeroParams, next_bit: Optional[int] = None) -> tuple[int, Action]:
    lo, hi = params.lo, params.hi
    if e == hi or e == lo:
        if next_bit is None:
            raise ValueError(f"error {e} sits on a peak and needs a bit")
        return (e + next_bit if e == hi else e - next_bit), Action.EMBEDDED
    if hi < e < params.z2:
        return e + 1, Action.SHIFTED
    if params.z1 < e < lo:
        return e - 1, Action.SHIFTED
    return e, Action.NONE


def recover_error(e_marked: int, params: PeakZeroParams) -> tuple[int, Optional[int]]:
    """Original error and the carried bit (``None`` when the pixel carried nothing)."""
    lo, hi = params.lo, params.hi
    if e_marked == hi + 1:
        return e_marked - 1, 1
    if e_marked == lo - 1:
        return e_marked + 1, 1
    if e_marked == params.pk1 or e_marked == params.pk2:
        return e_marked, 0
    if hi < e_marked <= max(params.z1, params.z2):
        return e_marked - 1, None
    if min(params.z1, params.z2) <= e_marked < lo:
        return e_marked + 1, None
    return e_marked, None


def visit_order(img: GrayImage, s: ParitySet, mode: OrderMode) -> np.ndarray:
    if OrderMode(mode) is OrderMode.FLUCTUATION:
        return fluctuation_permutation(img, s)
    return np.arange(coord_arrays(img.shape, s)[0].size)


def _set_state(img: GrayImage, s: ParitySet, mode: OrderMode):
    rows, cols = coord_arrays(img.shape, s)
    pred = predictions(img, s)
    errors = img.pixels[rows, cols].astype(np.int64) - pred
    order = visit_order(img, s, mode)
    return rows[order], cols[order], pred[order], errors[order], errors


def embed_set(img: GrayImage, s: ParitySet, bits, order_mode: OrderMode = OrderMode.FLUCTUATION):
    """Embed ``bits`` into set ``s``; returns ``(image, SetSideInfo, EmbedStats)``."""
    bits = as_bits(bits)
    rows, cols, pred, e, raster_errors = _set_state(img, s, order_mode)
    hist = ErrorHistogram.from_errors(raster_errors)
    try:
        params = select_peaks_zeros(hist)
    except CapacityError:
        if bits.size:
            raise
        return img, SetSideInfo(s, None, 0, 0), EmbedStats()
    if bits.size == 0:
        return img, SetSideInfo(s, params, 0, 0), EmbedStats()

    lo, hi = params.lo, params.hi
    carriers = np.flatnonzero((e == lo) | (e == hi))
    if bits.size > carriers.size:
        raise CapacityError(f"set {s.name} holds {carriers.size} bits, {bits.size} requested")
    prefix = int(carriers[bits.size - 1]) + 1
    e = e[:prefix]
    delta = np.zeros(prefix, dtype=np.int64)
    used = carriers[:bits.size]
    b = bits.astype(np.int64)
    delta[used] = np.where(e[used] == hi, b, -b)
    up = (e > hi) & (e < params.z2)
    down = (e < lo) & (e > params.z1)
    delta[up] = 1
    delta[down] = -1

    out = img.to_array()
    out[rows[:prefix], cols[:prefix]] = pred[:prefix] + e + delta
    ones = int(b.sum())
    isp = int(up.sum() + down.sum())
    stats = EmbedStats(ones, isp, prefix - ones - isp)
    log.debug("set %s: %d bits, prefix %d, isp %d, params %s", s.name, bits.size, prefix, isp, params)
    return GrayImage(out), SetSideInfo(s, params, int(bits.size), prefix), stats


def extract_set(img: GrayImage, s: ParitySet, info: SetSideInfo, order_mode: OrderMode = OrderMode.FLUCTUATION):
    """Recover the bits carried by set ``s`` and restore its pixels."""
    if info.bits_embedded == 0:
        if info.processed_prefix_len != 0:
            raise CorruptStegoError(f"set {s.name}: prefix without bits")
        return np.zeros(0, dtype=np.uint8), img
    params = info.params
    if params is None:
        raise CorruptStegoError(f"set {s.name} carries bits but has no peak parameters")
    rows, cols, pred, e_marked, _ = _set_state(img, s, order_mode)
    lo, hi = params.lo, params.hi
    carriers = np.flatnonzero((e_marked == lo - 1) | (e_marked == lo) | (e_marked == hi) | (e_marked == hi + 1))
    if carriers.size < info.bits_embedded:
        raise CorruptStegoError(
            f"set {s.name}: found {carriers.size} carrier pixels, metadata declares {info.bits_embedded} bits"
        )
    prefix = int(carriers[info.bits_embedded - 1]) + 1
    if prefix != info.processed_prefix_len:
        raise CorruptStegoError(
            f"set {s.name}: decoded prefix {prefix} differs from recorded {info.processed_prefix_len}"
        )
    em = e_marked[:prefix]
    used = carriers[:info.bits_embedded]
    bits = ((em[used] == lo - 1) | (em[used] == hi + 1)).astype(np.uint8)

    z_hi, z_lo = max(params.z1, params.z2), min(params.z1, params.z2)
    e = em.copy()
    e[em == hi + 1] -= 1
    e[em == lo - 1] += 1
    e[(em > hi + 1) & (em <= z_hi)] -= 1
    e[(em < lo - 1) & (em >= z_lo)] += 1

    restored = pred[:prefix] + e
    if restored.size and (restored.min() < 0 or restored.max() > 255):
        raise CorruptStegoError(f"set {s.name}: recovered pixel outside [0, 255]")
    out = img.to_array()
    out[rows[:prefix], cols[:prefix]] = restored
    return bits, GrayImage(out)


def split_payload(bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    half = (bits.size + 1) // 2
    return bits[:half], bits[half:]


def embed(img: GrayImage, payload, order_mode: OrderMode = OrderMode.FLUCTUATION) -> EmbedResult:
    order_mode = OrderMode(order_mode)
    bits = as_bits(payload)
    pre, locmap = preprocess(img)
    bits_a, bits_b = split_payload(bits)
    marked_a, info_a, stats_a = embed_set(pre, ParitySet.A, bits_a, order_mode)
    stego, info_b, stats_b = embed_set(marked_a, ParitySet.B, bits_b, order_mode)
    meta = StegoMetadata(
        width=img.width,
        height=img.height,
        order=order_mode.value,
        sets=(info_a, info_b),
        payload_bits=int(bits.size),
        locmap=locmap,
    )
    return EmbedResult(stego, meta, stats_a + stats_b, pre)


def extract(stego: GrayImage, meta: StegoMetadata) -> tuple[np.ndarray, GrayImage]:
    if (stego.width, stego.height) != (meta.width, meta.height):
        raise FormatError(
            f"metadata describes a {meta.width}x{meta.height} image, stego is {stego.width}x{stego.height}"
        )
    info = {i.tag: i for i in meta.sets}
    mode = OrderMode(meta.order)
    bits_b, img = extract_set(stego, ParitySet.B, info[ParitySet.B], mode)
    bits_a, img = extract_set(img, ParitySet.A, info[ParitySet.A], mode)
    payload = np.concatenate([bits_a, bits_b]).astype(np.uint8)
    if payload.size != meta.payload_bits:
        raise CorruptStegoError(f"recovered {payload.size} bits, metadata declares {meta.payload_bits}")
    return payload, postprocess(img, meta.locmap)


def set_capacity(img: GrayImage, s: ParitySet) -> int:
    rows, cols = coord_arrays(img.shape, s)
    errors = img.pixels[rows, cols].astype(np.int64) - predictions(img, s)
    hist = ErrorHistogram.from_errors(errors)
    return peak_capacity(hist, select_peaks_zeros(hist))


def capacity(img: GrayImage) -> int:
    """Gross double-peak capacity in bits.

    Set A is exact. Set B is read off the preprocessed cover before A is
    marked, so it is an estimate: the real B histogram moves slightly once A
    carries data.
    """
    pre, _ = preprocess(img)
    return set_capacity(pre, ParitySet.A) + set_capacity(pre, ParitySet.B)


def net_capacity(img: GrayImage) -> int:
    """Gross capacity minus the size of the compressed location map, in bits."""
    _, locmap = preprocess(img)
    return max(capacity(img) - 8 * len(locmap.compress()), 0)


def _capacity_of(img: GrayImage, s: ParitySet) -> int:
    try:
        return set_capacity(img, s)
    except CapacityError:
        return 0


def max_payload(img: GrayImage, stream: Sequence[int], order_mode: OrderMode = OrderMode.FLUCTUATION) -> int:
    """Length of the longest prefix of ``stream`` found to embed, scanning down.

    Set A's share is bounded exactly by its peaks. Set B's capacity is only
    known after A is marked and is not monotone in the length, so after each
    rejection the scan drops to what the measured B capacity admits. The
    returned length always embeds; a longer one may exist.
    """
    stream = as_bits(stream)
    pre, _ = preprocess(img)
    length = min(stream.size, 2 * _capacity_of(pre, ParitySet.A))
    while length > 0:
        bits_a, bits_b = split_payload(stream[:length])
        marked, _, _ = embed_set(pre, ParitySet.A, bits_a, order_mode)
        cap_b = _capacity_of(marked, ParitySet.B)
        if bits_b.size <= cap_b:
            return length
        length = min(length - 1, 2 * cap_b + 1)
    return 0
