"""Ring-density shape descriptors.

Pipeline for one silhouette: silhouette moments give the centroid, on-pixels
are counted in square (Chebyshev) shells of width 1 around the rounded
centroid, and the resulting count vector is either L1-normalized (``dhfp``)
or pushed through a Gaussian kernel with a plug-in bandwidth (``kdfpe_eq7``,
``kdfpe_kde``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AllZeroCountsError, CentroidOutOfGridError, EmptyMaskError, TooFewRingsError
from .image_io import normalize_to_grid

MODES = ("dhfp", "kdfpe_eq7", "kdfpe_kde")
DEFAULT_MODE = "kdfpe_eq7"
SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class DescriptorConfig:
    grid_n: int = 45
    bandwidth_constant: float = 1.059
    # extension points; only the defaults are implemented
    kernel: str = "gaussian"
    bandwidth_rule: str = "plugin"

    def __post_init__(self):
        if self.grid_n < 3:
            raise ValueError("grid_n must be >= 3")
        if self.bandwidth_constant <= 0:
            raise ValueError("bandwidth_constant must be positive")
        if self.kernel != "gaussian":
            raise NotImplementedError(f"kernel {self.kernel!r} is not implemented")
        if self.bandwidth_rule != "plugin":
            raise NotImplementedError(f"bandwidth rule {self.bandwidth_rule!r} is not implemented")


@dataclass(frozen=True)
class Centroid:
    xc: float
    yc: float
    xr: int
    yr: int


@dataclass(frozen=True, eq=False)
class RingCountVector:
    counts: np.ndarray  # counts[k - 1] = on pixels at Chebyshev distance k
    m_effective: int

    def __eq__(self, other):
        if not isinstance(other, RingCountVector):
            return NotImplemented
        return self.m_effective == other.m_effective and np.array_equal(self.counts, other.counts)

    def __len__(self):
        return len(self.counts)


@dataclass(frozen=True)
class Bandwidth:
    h: float
    s: float
    m: int
    degenerate: bool = False


@dataclass(frozen=True, eq=False)
class Descriptor:
    mode: str
    values: np.ndarray
    bandwidth: Bandwidth | None = field(default=None)

    def __len__(self):
        return len(self.values)


def moment(mask: np.ndarray, i: int, j: int) -> float:
    """Raw silhouette moment sum over on-pixels of x**i * y**j (x = column, y = row)."""
    if i < 0 or j < 0:
        raise ValueError("moment orders must be nonnegative")
    ys, xs = np.nonzero(np.asarray(mask, dtype=bool))
    return float(np.sum(xs.astype(np.float64) ** i * ys.astype(np.float64) ** j))


def centroid(mask: np.ndarray) -> Centroid:
    m00 = moment(mask, 0, 0)
    if m00 == 0:
        raise EmptyMaskError("centroid of an empty mask")
    xc = moment(mask, 1, 0) / m00
    yc = moment(mask, 0, 1) / m00
    return Centroid(xc, yc, math.floor(xc + 0.5), math.floor(yc + 0.5))


def chebyshev_distance(shape: tuple[int, int], xr: int, yr: int) -> np.ndarray:
    y, x = np.indices(shape)
    return np.maximum(np.abs(x - xr), np.abs(y - yr))


def ring_counts(mask: np.ndarray, c: Centroid) -> RingCountVector:
    """Count on-pixels in each square shell of width 1 around the rounded centroid.

    The vector has length ``grid_n - 1``; the centroid pixel itself is not
    counted and shells beyond ``m_effective`` stay zero.
    """
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    if h != w:
        raise ValueError(f"ring counts need a square grid, got {w}x{h}")
    n = h
    if not (0 <= c.xr < n and 0 <= c.yr < n):
        raise CentroidOutOfGridError(f"centroid ({c.xr}, {c.yr}) outside {n}x{n} grid")
    dist = chebyshev_distance(mask.shape, c.xr, c.yr)[mask]
    counts = np.bincount(dist, minlength=n)[1:n].astype(np.int64)
    m_eff = max(c.xr, n - 1 - c.xr, c.yr, n - 1 - c.yr)
    return RingCountVector(counts, m_eff)


def optimal_bandwidth(r: RingCountVector, constant: float = 1.059) -> Bandwidth:
    """Gaussian plug-in bandwidth ``constant * m**(-1/5) * s`` over the first m rings.

    ``s`` is the sample standard deviation (denominator m - 1). A zero
    spread falls back to ``s = 1`` and flags the result as degenerate.
    """
    m = r.m_effective
    if m < 2:
        raise TooFewRingsError(f"need at least 2 rings, have {m}")
    s = float(np.std(r.counts[:m].astype(np.float64), ddof=1))
    degenerate = s == 0.0
    if degenerate:
        s = 1.0
    return Bandwidth(h=constant * m ** (-0.2) * s, s=s, m=m, degenerate=degenerate)


def gaussian(z: np.ndarray) -> np.ndarray:
    return np.exp(-0.5 * np.square(z)) / SQRT_2PI


def kdfpe_eq7(r: RingCountVector, b: Bandwidth) -> Descriptor:
    """Zero-centered Gaussian of each count, ``phi(X_i / h) / h``, padded entries included."""
    if b.h <= 0:
        raise ValueError("bandwidth must be positive")
    values = gaussian(r.counts.astype(np.float64) / b.h) / b.h
    return Descriptor("kdfpe_eq7", values, b)


def kde(x, samples, h: float) -> np.ndarray:
    """Gaussian kernel density estimate with bandwidth h, evaluated at x."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    samples = np.asarray(samples, dtype=np.float64)
    z = (x[:, None] - samples[None, :]) / h
    return gaussian(z).sum(axis=1) / (samples.size * h)


def kdfpe_kde(r: RingCountVector, b: Bandwidth) -> Descriptor:
    """Full kernel density estimate over the first m counts, evaluated at every entry."""
    if b.h <= 0:
        raise ValueError("bandwidth must be positive")
    m = max(r.m_effective, 1)
    values = kde(r.counts, r.counts[:m], b.h)
    return Descriptor("kdfpe_kde", values, b)


def dhfp(r: RingCountVector) -> Descriptor:
    total = int(r.counts.sum())
    if total == 0:
        raise AllZeroCountsError("ring counts are all zero")
    return Descriptor("dhfp", r.counts / total)


def transform(r: RingCountVector, mode: str, config: DescriptorConfig | None = None) -> Descriptor:
    """Apply the mode-specific transform to a ring-count vector."""
    config = config or DescriptorConfig()
    if mode == "dhfp":
        return dhfp(r)
    if mode not in MODES:
        raise ValueError(f"unknown descriptor mode {mode!r}")
    b = optimal_bandwidth(r, config.bandwidth_constant)
    return kdfpe_eq7(r, b) if mode == "kdfpe_eq7" else kdfpe_kde(r, b)


def describe_rings(mask: np.ndarray, config: DescriptorConfig | None = None) -> RingCountVector:
    config = config or DescriptorConfig()
    grid = normalize_to_grid(mask, config.grid_n)
    return ring_counts(grid, centroid(grid))


def describe(mask: np.ndarray, mode: str = DEFAULT_MODE, config: DescriptorConfig | None = None) -> Descriptor:
    """normalize_to_grid -> centroid -> ring_counts -> transform."""
    return transform(describe_rings(mask, config), mode, config)
