import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import brute_otsu
from shaperet.errors import (
    ConstantImageError,
    EmptyMaskError,
    MaxvalOutOfRangeError,
    NonNumericTokenError,
    TruncatedDataError,
    UnknownMagicError,
)
from shaperet.image_io import GrayImage, binarize, normalize_to_grid, read_netpbm, write_netpbm


def test_read_ascii_graymap():
    img = read_netpbm(b"P2 2 1 255 0 255")
    assert (img.width, img.height, img.maxval) == (2, 1, 255)
    assert img.pixels.tolist() == [[0, 255]]


def test_read_with_comments():
    img = read_netpbm(b"P2\n# a comment\n2 # inline\n1\n255\n# x\n7 9\n")
    assert img.pixels.tolist() == [[7, 9]]


@pytest.mark.parametrize(
    "rgb, gray",
    [
        ((255, 255, 255), 255),
        ((100, 200, 50), 153),  # round(29.9 + 117.4 + 5.7)
        ((0, 0, 0), 0),
        ((1, 0, 0), 0),  # 0.299 rounds down
        ((0, 1, 0), 1),  # 0.587 rounds up
    ],
)
def test_pixmap_luminance(rgb, gray):
    ascii_img = read_netpbm(b"P3 1 1 255 %d %d %d" % rgb)
    binary_img = read_netpbm(b"P6 1 1 255\n" + bytes(rgb))
    assert ascii_img.pixels[0, 0] == gray
    assert binary_img.pixels[0, 0] == gray


def test_luminance_rounds_half_up():
    # 0.299 * 5 = 1.495 -> 1
    assert read_netpbm(b"P3 1 1 255 5 0 0").pixels[0, 0] == 1
    # 0.114 * 250 = 28.5 exactly -> 29 under half-up
    assert read_netpbm(b"P3 1 1 255 0 0 250").pixels[0, 0] == 29


def test_read_16bit_binary():
    data = b"P5 2 1 1000\n" + np.array([0, 1000], dtype=">u2").tobytes()
    img = read_netpbm(data)
    assert img.maxval == 1000
    assert img.pixels.tolist() == [[0, 1000]]
    assert img.to_8bit().tolist() == [[0, 255]]


@pytest.mark.parametrize(
    "data, exc",
    [
        (b"P7 1 1 255 0", UnknownMagicError),
        (b"XX", UnknownMagicError),
        (b"P2 2 2 255 1 2 3", TruncatedDataError),
        (b"P5 2 2 255\n\x00\x01", TruncatedDataError),
        (b"P2 1 1", TruncatedDataError),
        (b"P2 1 1 0 0", MaxvalOutOfRangeError),
        (b"P2 1 1 70000 0", MaxvalOutOfRangeError),
        (b"P2 1 1 255 abc", NonNumericTokenError),
        (b"P2 1 x 255 0", NonNumericTokenError),
    ],
)
def test_read_errors(data, exc):
    with pytest.raises(exc):
        read_netpbm(data)


def test_write_mask_ascii():
    out = write_netpbm(np.array([[True]]), ascii=True)
    assert out.split() == [b"P2", b"1", b"1", b"255", b"255"]
    out = write_netpbm(np.array([[True, False], [False, True]]), ascii=True)
    assert out.split()[4:] == [b"255", b"0", b"0", b"255"]


def test_write_rescales_deep_images():
    img = GrayImage(np.array([[0, 500, 1000]]), maxval=1000)
    back = read_netpbm(write_netpbm(img))
    assert back.maxval == 255
    assert back.pixels.tolist() == [[0, 128, 255]]


gray_images = st.tuples(st.integers(1, 12), st.integers(1, 12)).flatmap(
    lambda hw: arrays(np.int64, hw, elements=st.integers(0, 255))
)


@given(gray_images, st.booleans())
def test_gray_roundtrip(pixels, ascii):
    img = GrayImage(pixels, 255)
    assert read_netpbm(write_netpbm(img, ascii=ascii)) == img


@given(st.tuples(st.integers(1, 12), st.integers(1, 12)).flatmap(lambda hw: arrays(bool, hw)), st.booleans())
def test_mask_roundtrip(mask, ascii):
    back = read_netpbm(write_netpbm(mask, ascii=ascii))
    assert np.array_equal(binarize(back, "fixed", 128), mask)


def test_binarize_fixed():
    img = GrayImage(np.array([[0, 0], [0, 200]]))
    assert binarize(img, "fixed", 100).tolist() == [[False, False], [False, True]]
    full = GrayImage(np.full((3, 3), 255))
    assert binarize(full, "fixed", 128).all()
    with pytest.raises(ConstantImageError):
        binarize(full, "otsu")


@given(gray_images, st.integers(0, 255), st.integers(0, 255))
def test_binarize_fixed_monotone(pixels, t1, t2):
    lo, hi = sorted((t1, t2))
    img = GrayImage(pixels)
    assert not (binarize(img, "fixed", hi) & ~binarize(img, "fixed", lo)).any()


def test_otsu_bimodal_picks_minority():
    rng = np.random.default_rng(3)
    px = np.full(100, 10)
    px[rng.choice(100, size=10, replace=False)] = 240
    img = GrayImage(px.reshape(10, 10))
    mask = binarize(img, "otsu")
    assert np.array_equal(mask, img.pixels == 240)
    # inverted polarity: the minority is dark, still chosen as foreground
    inv = GrayImage(250 - img.pixels)
    assert np.array_equal(binarize(inv, "otsu"), img.pixels == 240)


@given(arrays(np.int64, (6, 7), elements=st.integers(0, 255)))
def test_otsu_matches_brute_force(pixels):
    from shaperet.image_io import otsu_threshold

    if pixels.min() == pixels.max():
        return
    t = otsu_threshold(np.bincount(pixels.ravel(), minlength=256))
    assert t == brute_otsu(pixels.ravel().tolist())


def test_normalize_identity_on_tight_grid():
    rng = np.random.default_rng(0)
    mask = rng.random((45, 45)) < 0.4
    mask[0, 0] = mask[-1, -1] = True
    assert np.array_equal(normalize_to_grid(mask, 45), mask)


def test_normalize_downsamples_constant_region():
    out = normalize_to_grid(np.ones((90, 90), dtype=bool), 45)
    assert out.shape == (45, 45) and out.all()


def test_normalize_crops_bounding_box():
    mask = np.zeros((20, 30), dtype=bool)
    mask[5:8, 10:13] = True
    assert normalize_to_grid(mask, 3).all()


def test_normalize_empty_mask():
    with pytest.raises(EmptyMaskError):
        normalize_to_grid(np.zeros((5, 5), dtype=bool), 45)


def test_normalize_never_empty_for_sparse_masks():
    mask = np.zeros((200, 200), dtype=bool)
    mask[0, 0] = mask[199, 199] = mask[100, 37] = True
    out = normalize_to_grid(mask, 45)
    assert out.shape == (45, 45) and out.any()


@given(
    arrays(bool, (8, 8)),
    st.integers(0, 12),
    st.integers(0, 12),
    st.integers(3, 20),
)
def test_normalize_translation_invariant(patch, dx, dy, grid_n):
    if not patch.any():
        return
    a = np.zeros((20, 20), dtype=bool)
    b = np.zeros((20, 20), dtype=bool)
    a[:8, :8] = patch
    b[dy : dy + 8, dx : dx + 8] = patch
    out = normalize_to_grid(b, grid_n)
    assert out.shape == (grid_n, grid_n) and out.any()
    assert np.array_equal(normalize_to_grid(a, grid_n), out)
