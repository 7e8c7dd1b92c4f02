"""Check the worked ring-count example and its descriptor values.

Searches 5x5 masks whose rounded centroid is (3, 2) and whose Chebyshev shells
hold 7, 8 and 1 pixels, then runs one of them through the pipeline and prints
the bandwidth and the three descriptor variants.
"""

import itertools

import numpy as np

from shaperet.descriptor import centroid, optimal_bandwidth, ring_counts, transform

TARGET = (7, 8, 1)
CENTRE = (3, 2)


def shells(n, cx, cy):
    out = {}
    for y, x in itertools.product(range(n), range(n)):
        out.setdefault(max(abs(x - cx), abs(y - cy)), []).append((y, x))
    return out


def search(n=5):
    cx, cy = CENTRE
    sh = shells(n, cx, cy)
    choices = [itertools.combinations(sh[d + 1], k) for d, k in enumerate(TARGET)]
    for centre_on, *picked in itertools.product((False, True), *choices):
        mask = np.zeros((n, n), dtype=bool)
        mask[cy, cx] = centre_on
        for pixels in picked:
            for y, x in pixels:
                mask[y, x] = True
        c = centroid(mask)
        if (c.xr, c.yr) == CENTRE:
            yield mask


def main():
    masks = list(search())
    print(f"{len(masks)} masks match")
    if not masks:
        return
    exact = sum(1 for m in masks if (centroid(m).xc, centroid(m).yc) == (3.0, 2.0))
    print(f"masks with exact centroid (3, 2): {exact}")
    mask = masks[0]
    print("\n".join("".join("1" if v else "0" for v in row) for row in mask.astype(int)))
    c = centroid(mask)
    print(f"centroid ({c.xc:.4f}, {c.yc:.4f}) -> ({c.xr}, {c.yr})")
    r = ring_counts(mask, c)
    print("ring counts", r.counts.tolist(), "m =", r.m_effective)
    b = optimal_bandwidth(r)
    print(f"s = {b.s:.10f}  h = {b.h:.10f}")
    for mode in ("kdfpe_eq7", "kdfpe_kde", "dhfp"):
        vals = transform(r, mode).values
        print(f"{mode:<10}", " ".join(f"{v:.10f}" for v in vals))


if __name__ == "__main__":
    main()
