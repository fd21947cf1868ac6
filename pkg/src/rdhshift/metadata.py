"""Sidecar metadata: what the extractor needs besides the stego pixels."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import FormatError
from .histogram import PeakZeroParams
from .image import PARITY_CONVENTION, ParitySet
from .locmap import ENCODING, LocationMap

FORMAT_VERSION = 1


@dataclass(frozen=True)
class SetSideInfo:
    tag: ParitySet
    params: Optional[PeakZeroParams]
    bits_embedded: int
    processed_prefix_len: int

    def to_dict(self) -> dict[str, Any]:
        p = self.params
        return {
            "tag": self.tag.name,
            "pk1": p.pk1 if p else None,
            "pk2": p.pk2 if p else None,
            "z1": p.z1 if p else None,
            "z2": p.z2 if p else None,
            "bits": self.bits_embedded,
            "prefix_len": self.processed_prefix_len,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SetSideInfo":
        try:
            tag = ParitySet[d["tag"]]
            peaks = [d["pk1"], d["pk2"], d["z1"], d["z2"]]
            bits, prefix = _nonneg(d["bits"]), _nonneg(d["prefix_len"])
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed set entry {d!r}") from exc
        if all(x is None for x in peaks):
            params = None
        elif all(isinstance(x, int) and not isinstance(x, bool) for x in peaks):
            params = PeakZeroParams(*peaks)
            if params.pk1 == params.pk2 or not params.z1 < params.lo or not params.z2 > params.hi:
                raise FormatError(f"inconsistent peak/zero parameters {peaks}")
        else:
            raise FormatError(f"peak/zero parameters must be integers, got {peaks}")
        if bits > prefix:
            raise FormatError("set carries more bits than pixels visited")
        return cls(tag, params, bits, prefix)


def _nonneg(x) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise TypeError(f"expected a non-negative integer, got {x!r}")
    return x


@dataclass(frozen=True)
class StegoMetadata:
    width: int
    height: int
    order: str
    sets: tuple[SetSideInfo, SetSideInfo]
    payload_bits: int
    locmap: LocationMap = field(default_factory=lambda: LocationMap([]))
    version: int = FORMAT_VERSION
    parity: str = PARITY_CONVENTION

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "width": self.width,
            "height": self.height,
            "parity": self.parity,
            "order": self.order,
            "sets": [s.to_dict() for s in self.sets],
            "payload_bits": self.payload_bits,
            "locmap_encoding": ENCODING,
            "locmap": self.locmap.compress().hex(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "StegoMetadata":
        if not isinstance(d, dict):
            raise FormatError("metadata must be a JSON object")
        if d.get("version") != FORMAT_VERSION:
            raise FormatError(f"unsupported metadata version {d.get('version')!r}")
        if d.get("parity") != PARITY_CONVENTION:
            raise FormatError(f"unsupported parity convention {d.get('parity')!r}")
        if d.get("locmap_encoding") != ENCODING:
            raise FormatError(f"unsupported location map encoding {d.get('locmap_encoding')!r}")
        if d.get("order") not in ("fluctuation", "raster"):
            raise FormatError(f"unknown order mode {d.get('order')!r}")
        try:
            width, height = _nonneg(d["width"]), _nonneg(d["height"])
            payload_bits = _nonneg(d["payload_bits"])
            raw_sets = d["sets"]
            locmap = LocationMap.decompress(bytes.fromhex(d["locmap"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"malformed metadata: {exc}") from exc
        if not isinstance(raw_sets, list) or len(raw_sets) != 2:
            raise FormatError("metadata must describe exactly two sets")
        sets = tuple(SetSideInfo.from_dict(s) for s in raw_sets)
        if {s.tag for s in sets} != {ParitySet.A, ParitySet.B}:
            raise FormatError("metadata must describe sets A and B")
        sets = tuple(sorted(sets, key=lambda s: s.tag.value))
        if payload_bits != sum(s.bits_embedded for s in sets):
            raise FormatError("payload_bits disagrees with the per-set bit counts")
        return cls(width, height, d["order"], sets, payload_bits, locmap)

    @classmethod
    def from_json(cls, text: str) -> "StegoMetadata":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"metadata is not valid JSON: {exc}") from exc
        return cls.from_dict(data)
