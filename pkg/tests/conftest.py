import os
from pathlib import Path

import numpy as np
import pytest

from rdhshift.fileio import read_pgm
from rdhshift.image import GrayImage

DATA_DIR = Path(__file__).parent / "data"

_criteria = []


def image_dirs():
    extra = os.environ.get("RDH_TEST_IMAGES")
    dirs = [Path(p) for p in extra.split(os.pathsep)] if extra else []
    return dirs + [DATA_DIR]


def find_test_image(name):
    for d in image_dirs():
        p = d / f"{name}.pgm"
        if p.exists():
            return p
    return None


def load_test_image(name):
    """Load a 512x512 USC-SIPI image by name, failing loudly when it is absent."""
    p = find_test_image(name)
    if p is None:
        searched = ", ".join(str(d) for d in image_dirs())
        pytest.fail(f"test image {name}.pgm not found (searched {searched}; set RDH_TEST_IMAGES)")
    return read_pgm(p)


def random_image(rng, h, w, kind):
    if kind == "noise":
        a = rng.integers(0, 256, (h, w))
    elif kind == "flat":
        a = np.full((h, w), rng.integers(0, 256))
        a = a + rng.integers(-2, 3, (h, w)) * (rng.random((h, w)) < 0.2)
    elif kind == "gradient":
        gy, gx = rng.integers(-6, 7, 2)
        a = rng.integers(0, 256) + gy * np.arange(h)[:, None] + gx * np.arange(w)[None, :]
        a = a + rng.integers(-1, 2, (h, w))
    elif kind == "smooth":
        base = rng.integers(0, 256, (h // 4 + 2, w // 4 + 2)).astype(float)
        a = np.kron(base, np.ones((4, 4)))[:h, :w]
        a = a + rng.normal(0, 2, (h, w))
    else:
        raise ValueError(kind)
    a = np.clip(np.rint(a), 0, 255).astype(np.int64)
    if rng.random() < 0.5:
        mask = rng.random((h, w)) < 0.05
        a[mask] = rng.choice([0, 255], mask.sum())
    return GrayImage(a)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def record():
    """Report an acceptance criterion's outcome; summarised at the end of the run."""

    def _record(name, passed, detail=""):
        _criteria.append((name, bool(passed), detail))
        line = f"[{'PASS' if passed else 'FAIL'}] {name}" + (f" -- {detail}" if detail else "")
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _criteria:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}" + (f" -- {detail}" if detail else ""))
