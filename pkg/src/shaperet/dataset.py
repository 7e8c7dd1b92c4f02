"""Synthetic labeled silhouette corpus standing in for a shop-item database.

Every class is one parametric shape. Its members are the base shape, an exact
copy, lossless quarter-turn rotations, lossy arbitrary-angle rotations, uniform
rescalings (which also change the canvas size) and salt-and-pepper noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CanvasTooSmallError

MIN_CANVAS = 16
# shapes stay inside this fraction of the half-canvas so rotations never clip
_EXTENT = 0.7

VARIANTS = (
    "base",
    "copy",
    "rot90",
    "rot180",
    "rot270",
    "rotate",
    "shrink",
    "grow",
    "noise",
    "rotate_scale",
)


@dataclass
class LabeledMask:
    id: str
    label: str
    mask: np.ndarray
    variant: str


def _polar(u, v):
    return np.hypot(u, v), np.arctan2(v, u)


def _disk(rng):
    return {}, lambda u, v: u**2 + v**2 <= 1.0


def _ellipse(rng):
    b = rng.uniform(0.35, 0.7)
    return {"b": b}, lambda u, v: u**2 + (v / b) ** 2 <= 1.0


def _ring(rng):
    inner = rng.uniform(0.45, 0.7)
    return {"inner": inner}, lambda u, v: (inner**2 <= u**2 + v**2) & (u**2 + v**2 <= 1.0)


def _rectangle(rng):
    t = rng.uniform(0.25, 0.6)
    a, b = math.cos(t), math.sin(t)
    return {"a": a, "b": b}, lambda u, v: (np.abs(u) <= a) & (np.abs(v) <= b)


def _cross(rng):
    w = rng.uniform(0.15, 0.3)
    arm = math.sqrt(1.0 - w**2)
    return {"w": w}, lambda u, v: ((np.abs(u) <= w) & (np.abs(v) <= arm)) | ((np.abs(v) <= w) & (np.abs(u) <= arm))


def _l_shape(rng):
    w = rng.uniform(0.25, 0.4)
    s = 1.0 / math.sqrt(2.0)

    def f(u, v):
        x, y = u / s, v / s  # unit square [-1, 1]^2 inscribed in the unit disk
        inside = (np.abs(x) <= 1) & (np.abs(y) <= 1)
        return inside & ((x <= -1 + 2 * w) | (y >= 1 - 2 * w))

    return {"w": w}, f


def _star(rng):
    k = int(rng.integers(4, 8))
    inner = rng.uniform(0.35, 0.55)

    def f(u, v):
        r, th = _polar(u, v)
        return r <= inner + (1 - inner) * np.abs(np.cos(k * th / 2.0)) ** 2

    return {"k": k, "inner": inner}, f


def _polygon(rng):
    n = int(rng.choice([3, 5, 6]))
    apothem = math.cos(math.pi / n)

    def f(u, v):
        inside = np.ones(np.shape(u), dtype=bool)
        for i in range(n):
            a = 2 * math.pi * (i + 0.5) / n
            inside &= u * math.cos(a) + v * math.sin(a) <= apothem
        return inside

    return {"n": n}, f


def _crescent(rng):
    shift = rng.uniform(0.35, 0.6)
    return {"shift": shift}, lambda u, v: (u**2 + v**2 <= 1.0) & ((u - shift) ** 2 + v**2 > 0.8**2)


FAMILIES = {
    "disk": _disk,
    "ellipse": _ellipse,
    "ring": _ring,
    "rectangle": _rectangle,
    "cross": _cross,
    "lshape": _l_shape,
    "star": _star,
    "polygon": _polygon,
    "crescent": _crescent,
}


def render(shape_fn, grid: int, angle: float, radius: float) -> np.ndarray:
    c = (grid - 1) / 2.0
    y, x = np.mgrid[0:grid, 0:grid].astype(np.float64)
    dx, dy = (x - c) / radius, (y - c) / radius
    ca, sa = math.cos(angle), math.sin(angle)
    u = ca * dx + sa * dy
    v = -sa * dx + ca * dy
    return np.asarray(shape_fn(u, v), dtype=bool)


def rotate_nearest(mask: np.ndarray, degrees: float) -> np.ndarray:
    """Rotate about the canvas center with nearest-neighbor sampling (lossy)."""
    h, w = mask.shape
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    t = math.radians(degrees)
    y, x = np.mgrid[0:h, 0:w].astype(np.float64)
    # inverse map: target -> source
    sx = math.cos(t) * (x - cx) + math.sin(t) * (y - cy) + cx
    sy = -math.sin(t) * (x - cx) + math.cos(t) * (y - cy) + cy
    ix = np.floor(sx + 0.5).astype(int)
    iy = np.floor(sy + 0.5).astype(int)
    ok = (ix >= 0) & (ix < w) & (iy >= 0) & (iy < h)
    out = np.zeros_like(mask, dtype=bool)
    out[ok] = mask[iy[ok], ix[ok]]
    return out


def rescale_nearest(mask: np.ndarray, factor: float) -> np.ndarray:
    h, w = mask.shape
    nh, nw = max(1, round(h * factor)), max(1, round(w * factor))
    rows = np.minimum((2 * np.arange(nh) + 1) * h // (2 * nh), h - 1)
    cols = np.minimum((2 * np.arange(nw) + 1) * w // (2 * nw), w - 1)
    return mask[np.ix_(rows, cols)]


def salt_and_pepper(mask: np.ndarray, fraction: float, rng: np.random.Generator) -> np.ndarray:
    out = mask.copy()
    n = int(fraction * mask.size)
    idx = rng.choice(mask.size, size=n, replace=False)
    out.flat[idx] = ~out.flat[idx]
    return out


def _arbitrary_angle(rng) -> float:
    # keep well away from quarter turns so the rotation is genuinely lossy
    return float(rng.uniform(10.0, 80.0) + 90.0 * rng.integers(0, 4))


def make_variant(base: np.ndarray, variant: str, rng: np.random.Generator) -> np.ndarray:
    if variant in ("base", "copy"):
        return base.copy()
    if variant == "rot90":
        return np.rot90(base, 1).copy()
    if variant == "rot180":
        return np.rot90(base, 2).copy()
    if variant == "rot270":
        return np.rot90(base, 3).copy()
    if variant == "rotate":
        return rotate_nearest(base, _arbitrary_angle(rng))
    if variant == "shrink":
        return rescale_nearest(base, rng.uniform(0.6, 0.85))
    if variant == "grow":
        return rescale_nearest(base, rng.uniform(1.2, 1.6))
    if variant == "noise":
        return salt_and_pepper(base, rng.uniform(0.005, 0.02), rng)
    if variant == "rotate_scale":
        return rescale_nearest(rotate_nearest(base, _arbitrary_angle(rng)), rng.uniform(0.7, 1.4))
    raise ValueError(f"unknown variant {variant!r}")


def _class_setup(i: int, seq: np.random.SeedSequence, grid: int):
    shape_seq, variant_seq, query_seq = seq.spawn(3)
    rng = np.random.default_rng(shape_seq)
    family = list(FAMILIES)[i % len(FAMILIES)]
    _, fn = FAMILIES[family](rng)
    angle = float(rng.uniform(0.0, 2 * math.pi))
    base = render(fn, grid, angle, _EXTENT * (grid - 1) / 2.0)
    return f"c{i:02d}_{family}", base, variant_seq, query_seq


def generate_dataset(classes: int = 20, per_class: int = 10, grid: int = 64, seed: int = 0) -> list[LabeledMask]:
    """Deterministic labeled corpus; members of class i are ``<label>_<j>``."""
    if classes < 1 or per_class < 1:
        raise ValueError("classes and per_class must be >= 1")
    if grid < MIN_CANVAS:
        raise CanvasTooSmallError(f"canvas {grid} smaller than {MIN_CANVAS}")
    items = []
    for i, seq in enumerate(np.random.SeedSequence(seed).spawn(classes)):
        label, base, variant_seq, _ = _class_setup(i, seq, grid)
        rng = np.random.default_rng(variant_seq)
        for j in range(per_class):
            variant = VARIANTS[j % len(VARIANTS)]
            items.append(LabeledMask(f"{label}_{j:02d}", label, make_variant(base, variant, rng), variant))
    return items


def generate_queries(classes: int = 20, per_class: int = 1, grid: int = 64, seed: int = 0) -> list[LabeledMask]:
    """Perturbed members of the same classes that are not in the corpus.

    Each query is a lossy rotation plus rescale plus light noise, drawn from a
    random stream separate from the corpus.
    """
    if grid < MIN_CANVAS:
        raise CanvasTooSmallError(f"canvas {grid} smaller than {MIN_CANVAS}")
    items = []
    for i, seq in enumerate(np.random.SeedSequence(seed).spawn(classes)):
        label, base, _, query_seq = _class_setup(i, seq, grid)
        rng = np.random.default_rng(query_seq)
        for j in range(per_class):
            m = make_variant(base, "rotate_scale", rng)
            m = salt_and_pepper(m, rng.uniform(0.0, 0.01), rng)
            items.append(LabeledMask(f"{label}_q{j:02d}", label, m, "query"))
    return items
