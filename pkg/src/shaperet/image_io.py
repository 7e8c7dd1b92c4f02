"""Netpbm decoding/encoding, grayscale conversion, binarization and grid normalization.

Images are held as ``GrayImage`` (a 2-D integer array plus its maxval). Binary
masks are plain 2-D boolean numpy arrays indexed ``[y, x]`` (row, column);
``True`` marks a foreground ("on") pixel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstantImageError,
    EmptyMaskError,
    MaxvalOutOfRangeError,
    NonNumericTokenError,
    SampleOutOfRangeError,
    TruncatedDataError,
    UnknownMagicError,
)

_MAGICS = {b"P2": (False, 1), b"P3": (False, 3), b"P5": (True, 1), b"P6": (True, 3)}
_WS = b" \t\n\r\v\f"


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Grayscale raster, ``pixels[y, x]`` in ``[0, maxval]``."""

    pixels: np.ndarray
    maxval: int = 255

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"GrayImage needs a non-empty 2-D array, got shape {px.shape}")
        if not 1 <= self.maxval <= 65535:
            raise MaxvalOutOfRangeError(f"maxval {self.maxval} outside 1..65535")
        object.__setattr__(self, "pixels", px.astype(np.int64, copy=False))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.maxval == other.maxval and np.array_equal(self.pixels, other.pixels)

    def to_8bit(self) -> np.ndarray:
        """Pixels rescaled to 0..255 (round half up); identity for maxval 255."""
        if self.maxval == 255:
            return self.pixels.copy()
        return (self.pixels * 510 + self.maxval) // (2 * self.maxval)


class _Reader:
    """Token reader for the netpbm header; ``#`` comments run to end of line."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _skip(self):
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos : self.pos + 1]
            if c in _WS:
                self.pos += 1
            elif c == b"#":
                while self.pos < n and data[self.pos : self.pos + 1] not in b"\r\n":
                    self.pos += 1
            else:
                break

    def token(self) -> bytes:
        self._skip()
        start = self.pos
        data, n = self.data, len(self.data)
        while self.pos < n and data[self.pos : self.pos + 1] not in _WS and data[self.pos : self.pos + 1] != b"#":
            self.pos += 1
        if start == self.pos:
            raise TruncatedDataError("unexpected end of data")
        return data[start : self.pos]

    def integer(self) -> int:
        tok = self.token()
        if not tok.isdigit():
            raise NonNumericTokenError(f"non-numeric token {tok[:20]!r}")
        return int(tok)


def _luminance(rgb: np.ndarray) -> np.ndarray:
    # integer form of round_half_up(0.299 R + 0.587 G + 0.114 B)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    return (299 * r + 587 * g + 114 * b + 500) // 1000


def read_netpbm(data: bytes) -> GrayImage:
    """Decode a P2/P3/P5/P6 image; color inputs are converted to luminance."""
    magic = data[:2]
    if magic not in _MAGICS:
        raise UnknownMagicError(f"unknown magic {magic!r}")
    binary, channels = _MAGICS[magic]
    rd = _Reader(data)
    rd.pos = 2
    if data[2:3] and data[2:3] not in _WS and data[2:3] != b"#":
        raise UnknownMagicError(f"unknown magic {data[:3]!r}")
    width = rd.integer()
    height = rd.integer()
    maxval = rd.integer()
    if width < 1 or height < 1:
        raise TruncatedDataError(f"bad dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise MaxvalOutOfRangeError(f"maxval {maxval} outside 1..65535")
    count = width * height * channels

    if binary:
        if rd.pos >= len(data):
            raise TruncatedDataError("missing raster")
        # exactly one whitespace byte separates maxval from the raster
        start = rd.pos + 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = count * dtype.itemsize
        raw = data[start : start + need]
        if len(raw) < need:
            raise TruncatedDataError(f"raster has {len(raw)} of {need} bytes")
        samples = np.frombuffer(raw, dtype=dtype).astype(np.int64)
    else:
        samples = np.empty(count, dtype=np.int64)
        for i in range(count):
            samples[i] = rd.integer()

    if samples.size and samples.max() > maxval:
        raise SampleOutOfRangeError(f"sample {samples.max()} exceeds maxval {maxval}")
    if channels == 3:
        gray = _luminance(samples.reshape(height, width, 3))
    else:
        gray = samples.reshape(height, width)
    return GrayImage(gray, maxval)


def write_netpbm(image: GrayImage | np.ndarray, ascii: bool = False) -> bytes:
    """Encode a GrayImage or boolean mask as P2 (ascii) or P5.

    Output maxval is always 255. Masks map to 255/0. Images with maxval above
    255 are rescaled; lower maxvals keep their sample values unchanged.
    """
    if isinstance(image, GrayImage):
        px = image.to_8bit() if image.maxval > 255 else image.pixels
    else:
        mask = np.asarray(image)
        if mask.dtype != bool:
            raise TypeError("expected GrayImage or boolean mask")
        px = np.where(mask, 255, 0)
    h, w = px.shape
    if ascii:
        rows = "\n".join(" ".join(str(v) for v in row) for row in px.tolist())
        return f"P2\n{w} {h}\n255\n{rows}\n".encode("ascii")
    return f"P5\n{w} {h}\n255\n".encode("ascii") + px.astype(np.uint8).tobytes()


def read_image(path) -> GrayImage:
    with open(path, "rb") as fh:
        return read_netpbm(fh.read())


def write_image(path, image, ascii: bool = False) -> None:
    with open(path, "wb") as fh:
        fh.write(write_netpbm(image, ascii=ascii))


def otsu_threshold(hist: np.ndarray) -> int:
    """Threshold t maximizing between-class variance of ``{< t}`` vs ``{>= t}``.

    Returns the lowest maximizing t in 1..len(hist)-1.
    """
    hist = np.asarray(hist, dtype=np.float64)
    levels = np.arange(hist.size, dtype=np.float64)
    total = hist.sum()
    w0 = np.cumsum(hist)[:-1]  # weight of {< t} for t = 1..L-1
    s0 = np.cumsum(hist * levels)[:-1]
    w1 = total - w0
    s1 = s0[-1] + hist[-1] * levels[-1] - s0
    valid = (w0 > 0) & (w1 > 0)
    var = np.zeros_like(w0)
    m0 = np.divide(s0, w0, out=np.zeros_like(s0), where=valid)
    m1 = np.divide(s1, w1, out=np.zeros_like(s1), where=valid)
    var[valid] = w0[valid] * w1[valid] * (m0[valid] - m1[valid]) ** 2
    return int(np.argmax(var)) + 1


def binarize(image: GrayImage, method: str = "otsu", threshold: int = 128) -> np.ndarray:
    """Binarize on the 0..255 scale.

    ``method="fixed"``: on iff intensity >= ``threshold``.
    ``method="otsu"``: Otsu threshold, then polarity chosen so that the
    foreground is the smaller class (single object on a homogeneous background).
    """
    px = image.to_8bit()
    if method == "fixed":
        return px >= threshold
    if method != "otsu":
        raise ValueError(f"unknown binarization method {method!r}")
    if px.min() == px.max():
        raise ConstantImageError("constant image has no Otsu threshold")
    t = otsu_threshold(np.bincount(px.ravel(), minlength=256))
    mask = px >= t
    if 2 * int(mask.sum()) > mask.size:
        mask = ~mask
    return mask


def _resample_index(n_target: int, n_source: int) -> np.ndarray:
    # floor((t + 0.5) * src / target), clamped; exact integer arithmetic
    t = np.arange(n_target)
    return np.minimum((2 * t + 1) * n_source // (2 * n_target), n_source - 1)


def bounding_box(mask: np.ndarray) -> tuple[int, int, int, int]:
    """Tight ``(y0, y1, x0, x1)`` half-open bounds of the foreground."""
    ys = np.flatnonzero(mask.any(axis=1))
    xs = np.flatnonzero(mask.any(axis=0))
    if ys.size == 0:
        raise EmptyMaskError("mask has no foreground pixels")
    return int(ys[0]), int(ys[-1]) + 1, int(xs[0]), int(xs[-1]) + 1


def normalize_to_grid(mask: np.ndarray, grid_n: int = 45) -> np.ndarray:
    """Crop to the foreground bounding box and nearest-neighbor resample to grid_n x grid_n."""
    mask = np.asarray(mask, dtype=bool)
    y0, y1, x0, x1 = bounding_box(mask)
    crop = mask[y0:y1, x0:x1]
    rows = _resample_index(grid_n, crop.shape[0])
    cols = _resample_index(grid_n, crop.shape[1])
    out = crop[np.ix_(rows, cols)]
    if not out.any():
        # sparse shapes can alias away entirely; map each source pixel forward instead
        ys, xs = np.nonzero(crop)
        out = np.zeros((grid_n, grid_n), dtype=bool)
        out[ys * grid_n // crop.shape[0], xs * grid_n // crop.shape[1]] = True
    return out
