import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from rdhshift.cli import SWEEP_HEADER, main
from rdhshift.fileio import read_pgm, write_pgm
from rdhshift.image import GrayImage

from conftest import DATA_DIR, random_image

LENA = DATA_DIR / "lena.pgm"


@pytest.fixture
def cover(tmp_path, rng):
    p = tmp_path / "cover.pgm"
    write_pgm(p, random_image(rng, 64, 64, "smooth"))
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def embed_args(cover, tmp_path, *extra, tag="s"):
    return ["embed", "--cover", cover, "--out", tmp_path / f"{tag}.pgm", "--meta", tmp_path / f"{tag}.json", *extra]


def test_embed_extract_round_trip_with_payload_file(tmp_path, cover, capsys):
    payload = tmp_path / "msg.bin"
    payload.write_bytes(b"hello, cover")
    before = cover.read_bytes()
    code, out, _ = run(capsys, *embed_args(cover, tmp_path, "--payload", payload))
    assert code == 0 and "psnr:" in out
    code, out, _ = run(
        capsys, "extract", "--stego", tmp_path / "s.pgm", "--meta", tmp_path / "s.json",
        "--out-payload", tmp_path / "got.bin", "--out-cover", tmp_path / "rec.pgm",
    )
    assert code == 0 and "verified: True" in out
    assert (tmp_path / "got.bin").read_bytes() == b"hello, cover"
    assert (tmp_path / "rec.pgm").read_bytes() == before
    assert cover.read_bytes() == before


def test_embed_random_bits_deterministic_on_lena(tmp_path, capsys):
    args = ["--random-bits", 10000, "--seed", 42, "--format", "json"]
    code, out, _ = run(capsys, *embed_args(LENA, tmp_path, *args, tag="one"))
    assert code == 0
    report = json.loads(out)
    assert report["payload_bits"] == 10000
    assert round(report["bpp"], 4) == 0.0381
    assert report["isp_count"] > 0 and report["valid_shift_count"] > 0
    assert run(capsys, *embed_args(LENA, tmp_path, *args, tag="two"))[0] == 0
    assert (tmp_path / "one.pgm").read_bytes() == (tmp_path / "two.pgm").read_bytes()
    assert (tmp_path / "one.json").read_bytes() == (tmp_path / "two.json").read_bytes()


def test_embed_over_capacity_writes_nothing(tmp_path, cover, capsys):
    code, _, err = run(capsys, *embed_args(cover, tmp_path, "--random-bits", 100000))
    assert code == 2
    assert "net capacity" in err
    assert sorted(p.name for p in tmp_path.iterdir()) == ["cover.pgm"]


def test_extract_with_wrong_metadata(tmp_path, rng, capsys):
    for tag, seed in (("a", 1), ("b", 2)):
        p = tmp_path / f"{tag}_cover.pgm"
        write_pgm(p, random_image(np.random.default_rng(seed), 48, 48, "smooth"))
        assert run(capsys, *embed_args(p, tmp_path, "--random-bits", 200, tag=tag))[0] == 0
    before = set(tmp_path.iterdir())
    code, _, err = run(
        capsys, "extract", "--stego", tmp_path / "a.pgm", "--meta", tmp_path / "b.json",
        "--out-payload", tmp_path / "p.bin", "--out-cover", tmp_path / "r.pgm",
    )
    assert code in (1, 3) and err.startswith("rdhshift:")
    assert set(tmp_path.iterdir()) == before


def test_extract_with_malformed_metadata(tmp_path, cover, capsys):
    assert run(capsys, *embed_args(cover, tmp_path, "--random-bits", 50))[0] == 0
    (tmp_path / "bad.json").write_text('{"version": 7}')
    code, _, _ = run(
        capsys, "extract", "--stego", tmp_path / "s.pgm", "--meta", tmp_path / "bad.json",
        "--out-payload", tmp_path / "p.bin", "--out-cover", tmp_path / "r.pgm",
    )
    assert code == 1
    assert not (tmp_path / "p.bin").exists() and not (tmp_path / "r.pgm").exists()


def test_extract_detects_tampered_stego(tmp_path, cover, capsys):
    assert run(capsys, *embed_args(cover, tmp_path, "--random-bits", 300))[0] == 0
    stego = read_pgm(tmp_path / "s.pgm").to_array()
    stego[20:30, 20:30] ^= 1
    write_pgm(tmp_path / "s.pgm", GrayImage(stego))
    code, _, _ = run(
        capsys, "extract", "--stego", tmp_path / "s.pgm", "--meta", tmp_path / "s.json",
        "--out-payload", tmp_path / "p.bin", "--out-cover", tmp_path / "r.pgm",
    )
    assert code == 3
    assert not (tmp_path / "p.bin").exists()


def test_malformed_and_missing_cover(tmp_path, capsys):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P6\n5 5\n255\n" + bytes(75))
    assert run(capsys, *embed_args(bad, tmp_path, "--random-bits", 5))[0] == 1
    assert run(capsys, "capacity", "--cover", tmp_path / "missing.pgm")[0] == 1


def test_capacity_command(cover, capsys):
    code, out, _ = run(capsys, "capacity", "--cover", cover, "--format", "json")
    assert code == 0
    r = json.loads(out)
    assert r["gross_capacity_bits"] == r["capacity_a"] + r["capacity_b_estimate"]
    assert r["net_capacity_bits"] == r["gross_capacity_bits"] - r["locmap_bits"]


def test_stats_command(tmp_path, cover, capsys):
    assert run(capsys, *embed_args(cover, tmp_path, "--random-bits", 64))[0] == 0
    code, out, _ = run(capsys, "stats", "--cover", cover, "--stego", tmp_path / "s.pgm", "--meta", tmp_path / "s.json", "--format", "json")
    assert code == 0
    r = json.loads(out)
    assert r["payload_bits"] == 64 and r["mse"] > 0
    code, out, _ = run(capsys, "stats", "--cover", cover, "--stego", cover)
    assert "psnr: inf" in out


def test_sweep_on_lena(tmp_path, capsys):
    csv_path = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--cover", LENA, "--bpp-list", "0.01,0.02,0.03,0.04,0.05", "--csv", csv_path)
    assert code == 0
    rows = list(csv.reader(io.StringIO(csv_path.read_text())))
    assert rows[0] == SWEEP_HEADER
    body = rows[1:]
    assert len(body) == 10
    for mode in ("fluctuation", "raster"):
        assert [r[0] for r in body if r[1] == mode] == ["0.01", "0.02", "0.03", "0.04", "0.05"]
    by = {(r[0], r[1]): r for r in body}
    for bpp in ("0.01", "0.02", "0.03", "0.04", "0.05"):
        fl, ra = by[(bpp, "fluctuation")], by[(bpp, "raster")]
        assert float(fl[2]) > float(ra[2])
        assert int(fl[3]) < int(ra[3])
        assert fl[4] == ra[4]


def test_sweep_records_capacity_errors(tmp_path, capsys):
    p = tmp_path / "tiny.pgm"
    write_pgm(p, random_image(np.random.default_rng(5), 16, 16, "smooth"))
    code, out, _ = run(capsys, "sweep", "--cover", p, "--bpp-list", "0.01,5", "--orders", "raster")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 3
    assert rows[2][:5] == ["5", "raster", "capacity_error", "", ""]


def test_isp_blocks_command(capsys):
    code, out, _ = run(capsys, "isp-blocks", "--cover", LENA, "--block-a", "252,318,20,20", "--block-b", "450,300,20,20", "--format", "json")
    assert code == 0
    r = json.loads(out)
    assert r["isp_a"] > r["isp_b"]


def test_bad_region_argument(capsys):
    with pytest.raises(SystemExit):
        main(["isp-blocks", "--cover", str(LENA), "--block-a", "1,2,3", "--block-b", "0,0,3,3"])


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "rdhshift", "capacity", "--cover", str(LENA)],
        capture_output=True, text=True, env={"RDH_LOG": "bogus", "PATH": ""},
    )
    assert proc.returncode == 0, proc.stderr
    assert "net_capacity_bits:" in proc.stdout
