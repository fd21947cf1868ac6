import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rdhshift.errors import CorruptStegoError, FormatError
from rdhshift.image import GrayImage
from rdhshift.locmap import LocationMap, postprocess, preprocess, rle_decode, rle_encode


def test_preprocess_without_candidates():
    px = np.full((6, 6), 100)
    px[0, 0] = 0
    px[5, 5] = 255
    img = GrayImage(px)
    pre, m = preprocess(img)
    assert pre == img
    assert len(m) == 0


def test_preprocess_worked_example():
    px = np.full((5, 5), 128)
    px[0, :] = 0  # border stays untouched
    interior = [0, 1, 254, 255, 7, 100, 2, 253, 9]
    px[1:4, 1:4] = np.array(interior).reshape(3, 3)
    pre, m = preprocess(GrayImage(px))
    assert pre.pixels[1:4, 1:4].ravel().tolist() == [1, 1, 254, 254, 7, 100, 2, 253, 9]
    assert m.bits.tolist() == [1, 0, 0, 1]
    assert (pre.pixels[0] == 0).all()
    assert postprocess(pre, m) == GrayImage(px)


@settings(max_examples=100, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(5, 16), st.integers(5, 16)), elements=st.sampled_from([0, 1, 2, 128, 253, 254, 255])))
def test_preprocess_round_trip(px):
    img = GrayImage(px)
    pre, m = preprocess(img)
    inner = pre.pixels[1:-1, 1:-1]
    assert inner.min() >= 1 and inner.max() <= 254
    assert np.array_equal(pre.pixels[0], px[0]) and np.array_equal(pre.pixels[:, -1], px[:, -1])
    assert postprocess(pre, m) == img
    assert LocationMap.decompress(m.compress()) == m


def test_postprocess_length_mismatch():
    px = np.full((5, 5), 100)
    px[2, 2] = 1
    with pytest.raises(CorruptStegoError):
        postprocess(GrayImage(px), LocationMap([]))


@pytest.mark.parametrize(
    "bits, encoded",
    [
        ([], b"\x00"),
        ([0], b"\x01\x00\x01"),
        ([1, 1, 0, 0, 0, 1], b"\x06\x01\x02\x03\x01"),
        ([0] * 200, b"\xc8\x01\x00\xc8\x01"),
    ],
)
def test_rle_known_encodings(bits, encoded):
    assert rle_encode(bits) == encoded
    assert rle_decode(encoded).tolist() == bits


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=600))
def test_rle_round_trip(bits):
    assert rle_decode(rle_encode(bits)).tolist() == bits


@pytest.mark.parametrize("data", [b"", b"\x05", b"\x03\x02\x03", b"\x03\x00\x02", b"\x03\x00\x03\x01", b"\x03\x00\x00\x03", b"\x00\x00", b"\x80"])
def test_rle_rejects_malformed(data):
    with pytest.raises(FormatError):
        rle_decode(data)
