"""Independent reference implementations used to check the main code paths.

Everything here is deliberately naive: pure-Python loops, mpmath, or
exhaustive enumeration. None of it imports from ``shaperet``.
"""

from __future__ import annotations

import itertools
import math

import mpmath


def mp_bandwidth(counts, m=None, constant="1.059", dps=50):
    """Plug-in bandwidth at arbitrary precision: returns (s, h) as mpf."""
    with mpmath.workdps(dps):
        xs = [mpmath.mpf(int(c)) for c in counts]
        m = len(xs) if m is None else m
        xs = xs[:m]
        mean = sum(xs) / m
        s = mpmath.sqrt(sum((x - mean) ** 2 for x in xs) / (m - 1))
        h = mpmath.mpf(constant) * mpmath.mpf(m) ** (mpmath.mpf(-1) / 5) * s
        return +s, +h


def mp_eq7(counts, h, dps=50):
    with mpmath.workdps(dps):
        h = mpmath.mpf(h)
        return [
            1 / (h * mpmath.sqrt(2 * mpmath.pi)) * mpmath.exp(-((mpmath.mpf(int(c)) / h) ** 2) / 2)
            for c in counts
        ]


def mp_kde(points, samples, h, dps=50):
    with mpmath.workdps(dps):
        h = mpmath.mpf(h)
        m = len(samples)
        norm = 1 / (m * h * mpmath.sqrt(2 * mpmath.pi))
        return [
            norm * sum(mpmath.exp(-(((mpmath.mpf(int(x)) - int(xi)) / h) ** 2) / 2) for xi in samples)
            for x in points
        ]


def brute_centroid(mask):
    """mask is a list of rows of 0/1; returns (xc, yc) as exact fractions of floats."""
    m00 = m10 = m01 = 0
    for y, row in enumerate(mask):
        for x, v in enumerate(row):
            if v:
                m00 += 1
                m10 += x
                m01 += y
    return m10 / m00, m01 / m00


def brute_ring_counts(mask, xr, yr):
    n = len(mask)
    counts = [0] * (n - 1)
    for y in range(n):
        for x in range(n):
            if mask[y][x]:
                d = max(abs(x - xr), abs(y - yr))
                if d > 0:
                    counts[d - 1] += 1
    return counts


def naive_cosine(p, q):
    dot = sum(a * b for a, b in zip(p, q))
    np_ = math.sqrt(sum(a * a for a in p))
    nq = math.sqrt(sum(b * b for b in q))
    return dot / (np_ * nq)


def flood_fill_components(mask):
    """8-connected components as lists of (y, x), in row-major discovery order."""
    h, w = len(mask), len(mask[0])
    seen = [[False] * w for _ in range(h)]
    comps = []
    for y in range(h):
        for x in range(w):
            if mask[y][x] and not seen[y][x]:
                stack, comp = [(y, x)], []
                seen[y][x] = True
                while stack:
                    cy, cx = stack.pop()
                    comp.append((cy, cx))
                    for dy, dx in itertools.product((-1, 0, 1), repeat=2):
                        ny, nx = cy + dy, cx + dx
                        if 0 <= ny < h and 0 <= nx < w and mask[ny][nx] and not seen[ny][nx]:
                            seen[ny][nx] = True
                            stack.append((ny, nx))
                comps.append(comp)
    return comps


def brute_otsu(values):
    """Scan t = 1..255; foreground candidate is {v >= t}. Lowest best t wins."""
    best_t, best_var = None, -1.0
    n = len(values)
    for t in range(1, 256):
        lo = [v for v in values if v < t]
        hi = [v for v in values if v >= t]
        if not lo or not hi:
            continue
        w0, w1 = len(lo) / n, len(hi) / n
        m0, m1 = sum(lo) / len(lo), sum(hi) / len(hi)
        var = w0 * w1 * (m0 - m1) ** 2
        if var > best_var:
            best_t, best_var = t, var
    return best_t


def worked_example_masks(target_counts=(7, 8, 1), centroid=(3, 2), n=5):
    """Enumerate 5x5 masks whose rounded centroid and shell counts match.

    Shells of a fixed centre are disjoint, so the search enumerates the
    on-subsets of each shell with the required size (plus the centre pixel on
    or off) instead of all 2**25 masks, then keeps those whose rounded
    centroid is the assumed centre.
    """
    cx, cy = centroid
    shells = {}
    for y in range(n):
        for x in range(n):
            d = max(abs(x - cx), abs(y - cy))
            shells.setdefault(d, []).append((x, y))
    if max(shells) > len(target_counts):
        return
    choices = [
        itertools.combinations(shells.get(k, []), target_counts[k - 1])
        for k in range(1, len(target_counts) + 1)
    ]
    for combo in itertools.product(*choices):
        for centre_on in (False, True):
            pixels = [p for part in combo for p in part]
            if centre_on:
                pixels.append((cx, cy))
            m00 = len(pixels)
            xc = sum(p[0] for p in pixels) / m00
            yc = sum(p[1] for p in pixels) / m00
            if math.floor(xc + 0.5) == cx and math.floor(yc + 0.5) == cy:
                mask = [[0] * n for _ in range(n)]
                for x, y in pixels:
                    mask[y][x] = 1
                yield mask, (xc, yc)


def naive_ranking(query, records):
    """records: list of (id, label, vector). Sort by score desc, id asc."""
    scored = [(naive_cosine(query, v), rid, label) for rid, label, v in records]
    scored.sort(key=lambda t: (-t[0], t[1]))
    return scored
