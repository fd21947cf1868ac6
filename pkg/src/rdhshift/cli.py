"""Command-line front end: embed, extract, capacity, stats, sweep, isp-blocks.

Exit codes: 0 success, 1 I/O or format error, 2 capacity error, 3 corrupt stego.
Set RDH_LOG (DEBUG, INFO, WARNING, ...) for diagnostic output on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import codec, metrics
from .errors import CapacityError, CorruptStegoError, FormatError, RDHError
from .fileio import atomic_write, bits_to_bytes, bytes_to_bits, format_pgm, random_bits, read_pgm
from .image import GrayImage, ParitySet
from .locmap import preprocess
from .metadata import StegoMetadata

log = logging.getLogger("rdhshift")

SWEEP_HEADER = ["bpp", "mode", "psnr_db", "isp", "valid", "capacity_bits"]


@dataclass(frozen=True)
class RunConfig:
    order_mode: codec.OrderMode
    payload_path: Optional[Path]
    random_bits: Optional[int]
    seed: int
    report_format: str = "text"

    def payload(self) -> np.ndarray:
        if self.payload_path is not None:
            return bytes_to_bits(self.payload_path.read_bytes())
        return random_bits(self.random_bits, self.seed)


def _emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write("".join(f"{k}: {v}\n" for k, v in report.items()))


def _region(text: str) -> tuple[int, int, int, int]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        parts = ()
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("region must be top,left,height,width")
    return parts


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _order_list(text: str) -> list[codec.OrderMode]:
    try:
        return [codec.OrderMode(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def cmd_embed(args) -> int:
    cfg = RunConfig(codec.OrderMode(args.order), args.payload, args.random_bits, args.seed, args.format)
    cover = read_pgm(args.cover)
    bits = cfg.payload()
    try:
        result = codec.embed(cover, bits, cfg.order_mode)
    except CapacityError as exc:
        raise CapacityError(
            f"{exc}; payload is {bits.size} bits, net capacity is about {codec.net_capacity(cover)} bits"
        ) from exc
    report = metrics.quality_report(cover, result.stego, result.stats, int(bits.size), result.preprocessed)
    atomic_write(args.meta, result.meta.to_json().encode())
    atomic_write(args.out, format_pgm(result.stego))
    _emit(report.to_dict(), cfg.report_format)
    return 0


def cmd_extract(args) -> int:
    stego = read_pgm(args.stego)
    meta = StegoMetadata.from_json(Path(args.meta).read_text())
    payload, cover = codec.extract(stego, meta)
    check = codec.embed(cover, payload, meta.order)
    if check.stego != stego or check.meta.to_dict() != meta.to_dict():
        raise CorruptStegoError("re-embedding the recovered cover does not reproduce the stego image")
    atomic_write(args.out_payload, bits_to_bytes(payload))
    atomic_write(args.out_cover, format_pgm(cover))
    _emit({"status": "recovered", "verified": True, "payload_bits": int(payload.size)}, args.format)
    return 0


def cmd_capacity(args) -> int:
    cover = read_pgm(args.cover)
    pre, locmap = preprocess(cover)
    per_set = {s: codec.set_capacity(pre, s) for s in ParitySet}
    gross = sum(per_set.values())
    net = codec.net_capacity(cover)
    report = {
        "width": cover.width,
        "height": cover.height,
        "capacity_a": per_set[ParitySet.A],
        "capacity_b_estimate": per_set[ParitySet.B],
        "gross_capacity_bits": gross,
        "locmap_bits": 8 * len(locmap.compress()),
        "net_capacity_bits": net,
        "net_bpp": net / cover.size,
    }
    _emit(report, args.format)
    return 0


def cmd_stats(args) -> int:
    cover = read_pgm(args.cover)
    stego = read_pgm(args.stego)
    m = metrics.mse(cover, stego)
    report = {"mse": m, "psnr": metrics.format_db(metrics.psnr_from_mse(m))}
    if args.meta:
        meta = StegoMetadata.from_json(Path(args.meta).read_text())
        report["payload_bits"] = meta.payload_bits
        report["bpp"] = meta.payload_bits / cover.size
    _emit(report, args.format)
    return 0


def sweep_rows(cover: GrayImage, bpps: Sequence[float], orders: Sequence[codec.OrderMode], seed: int = 0):
    gross = codec.capacity(cover)
    for bpp in bpps:
        n = int(round(bpp * cover.size))
        bits = random_bits(n, seed)
        for mode in orders:
            try:
                r = codec.embed(cover, bits, mode)
            except CapacityError:
                yield [f"{bpp:g}", mode.value, "capacity_error", "", "", gross]
                continue
            yield [
                f"{bpp:g}",
                mode.value,
                metrics.format_db(metrics.psnr(cover, r.stego)),
                r.stats.isp_count,
                r.stats.valid_shift_count,
                gross,
            ]


def cmd_sweep(args) -> int:
    cover = read_pgm(args.cover)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in sweep_rows(cover, args.bpp_list, args.orders, args.seed):
        log.info("sweep row %s", row)
        writer.writerow(row)
    if args.csv:
        atomic_write(args.csv, buf.getvalue().encode())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def cmd_isp_blocks(args) -> int:
    img = read_pgm(args.cover)
    isp_a, isp_b = metrics.block_isp_experiment(img, args.block_a, args.block_b, args.bits)
    _emit({"block_a": ",".join(map(str, args.block_a)), "isp_a": isp_a,
           "block_b": ",".join(map(str, args.block_b)), "isp_b": isp_b}, args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rdhshift", description="Reversible data hiding by fluctuation-ordered histogram shifting.")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("embed", parents=[fmt], help="hide a payload in a PGM cover")
    p.add_argument("--cover", required=True, type=Path)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--payload", type=Path, help="payload file, bits read MSB first")
    src.add_argument("--random-bits", type=int, metavar="N", help="embed N seeded random bits")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", choices=[m.value for m in codec.OrderMode], default="fluctuation")
    p.add_argument("--out", required=True, type=Path, help="stego PGM")
    p.add_argument("--meta", required=True, type=Path, help="metadata sidecar (JSON)")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", parents=[fmt], help="recover payload and cover")
    p.add_argument("--stego", required=True, type=Path)
    p.add_argument("--meta", required=True, type=Path)
    p.add_argument("--out-payload", required=True, type=Path)
    p.add_argument("--out-cover", required=True, type=Path)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("capacity", parents=[fmt], help="report embedding capacity")
    p.add_argument("--cover", required=True, type=Path)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("stats", parents=[fmt], help="MSE/PSNR between cover and stego")
    p.add_argument("--cover", required=True, type=Path)
    p.add_argument("--stego", required=True, type=Path)
    p.add_argument("--meta", type=Path)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("sweep", help="PSNR/ISP over a list of payload rates")
    p.add_argument("--cover", required=True, type=Path)
    p.add_argument("--bpp-list", required=True, type=_float_list)
    p.add_argument("--orders", type=_order_list, default=[codec.OrderMode.FLUCTUATION, codec.OrderMode.RASTER])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", type=Path, help="output CSV (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("isp-blocks", parents=[fmt], help="ISP count of two equal-size blocks")
    p.add_argument("--cover", required=True, type=Path)
    p.add_argument("--block-a", required=True, type=_region, help="top,left,height,width")
    p.add_argument("--block-b", required=True, type=_region, help="top,left,height,width")
    p.add_argument("--bits", type=int, default=15)
    p.set_defaults(func=cmd_isp_blocks)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    level = getattr(logging, os.environ.get("RDH_LOG", "WARNING").upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RDHError as exc:
        print(f"rdhshift: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"rdhshift: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
