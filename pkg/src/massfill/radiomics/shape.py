"""2D shape descriptors of a binary mask.

Contour quantities come from a marching-squares trace at level 0.5 on the
pixel grid (crossings land on edge midpoints). Saddle cells treat the cell
center as background, matching 4-connectivity of the foreground. Segments
are oriented with the foreground on the left, so each closed loop circulates
consistently and the shoelace sum subtracts holes.

The raw midpoint polygon overestimates smooth perimeters by ~6% (staircase
bias), so loops get one neighbor-averaging pass (v' = (prev + 2v + next)/4)
before measuring. Perimeter, mesh surface and maximum diameter all use the
smoothed polygon; since any polygon satisfies P^2 >= 4*pi*A, sphericity
stays <= 1 with near-1 values for discrete disks.

Axis lengths use 4*sqrt(eigenvalue) of the population covariance of
foreground pixel-center coordinates (unit spacing).
"""

import math

import numpy as np

from .. import backend

# per-code directed segments; endpoints are (x, y) offsets from the cell's
# top-left pixel center, y pointing down. T/R/B/L edge midpoints.
_T = (0.5, 0.0)
_R = (1.0, 0.5)
_B = (0.5, 1.0)
_L = (0.0, 0.5)
# code bits: 1=top-left, 2=top-right, 4=bottom-right, 8=bottom-left
MARCHING_SEGMENTS = {
    0: [],
    1: [(_L, _T)],
    2: [(_T, _R)],
    3: [(_L, _R)],
    4: [(_R, _B)],
    5: [(_L, _T), (_R, _B)],
    6: [(_T, _B)],
    7: [(_L, _B)],
    8: [(_B, _L)],
    9: [(_B, _T)],
    10: [(_T, _R), (_B, _L)],
    11: [(_B, _R)],
    12: [(_R, _L)],
    13: [(_R, _T)],
    14: [(_T, _L)],
    15: [],
}

SHAPE_FEATURE_COUNT = 9


class MultiComponentMaskError(ValueError):
    pass


def _segments(mask):
    """All directed contour segments as an (n, 4) array of doubled integer
    coordinates (x1, y1, x2, y2), so vertices hash exactly."""
    padded = np.pad(np.asarray(mask, dtype=bool), 1).astype(np.int8)
    tl = padded[:-1, :-1]
    tr = padded[:-1, 1:]
    br = padded[1:, 1:]
    bl = padded[1:, :-1]
    codes = tl + 2 * tr + 4 * br + 8 * bl

    chunks = []
    for code in range(1, 15):
        segs = MARCHING_SEGMENTS[code]
        if not segs:
            continue
        rows, cols = np.nonzero(codes == code)
        if rows.size == 0:
            continue
        cx2 = 2 * (cols.astype(np.int64) - 1)
        cy2 = 2 * (rows.astype(np.int64) - 1)
        for (ox1, oy1), (ox2, oy2) in segs:
            chunk = np.stack(
                [
                    cx2 + int(2 * ox1),
                    cy2 + int(2 * oy1),
                    cx2 + int(2 * ox2),
                    cy2 + int(2 * oy2),
                ],
                axis=1,
            )
            chunks.append(chunk)
    if not chunks:
        return np.zeros((0, 4), dtype=np.int64)
    return np.concatenate(chunks, axis=0)


def trace_loops(mask):
    """Closed contour loops of a mask, smoothed once.

    Returns a list of (n, 2) float64 arrays of (x, y) vertices in traversal
    order (loop closure implied). Orientation is consistent, so shoelace
    areas of holes carry the opposite sign from the outer boundary.
    """
    segs = _segments(mask)
    succ = {(int(x1), int(y1)): (int(x2), int(y2)) for x1, y1, x2, y2 in segs}
    loops = []
    while succ:
        start = next(iter(succ))
        loop = [start]
        cur = succ.pop(start)
        while cur != start:
            loop.append(cur)
            cur = succ.pop(cur)
        pts = np.asarray(loop, dtype=np.float64) / 2.0
        prev_pts = np.roll(pts, 1, axis=0)
        next_pts = np.roll(pts, -1, axis=0)
        loops.append((prev_pts + 2.0 * pts + next_pts) / 4.0)
    return loops


def contour_measurements(mask):
    """(perimeter, area, vertices) of the smoothed contour polygon."""
    loops = trace_loops(mask)
    perimeter = 0.0
    signed_area2 = 0.0
    all_pts = []
    for pts in loops:
        nxt = np.roll(pts, -1, axis=0)
        perimeter += float(np.hypot(nxt[:, 0] - pts[:, 0], nxt[:, 1] - pts[:, 1]).sum())
        signed_area2 += float((pts[:, 0] * nxt[:, 1] - nxt[:, 0] * pts[:, 1]).sum())
        all_pts.append(pts)
    vertices = np.concatenate(all_pts, axis=0) if all_pts else np.zeros((0, 2))
    return perimeter, abs(signed_area2) / 2.0, vertices


def max_pairwise_distance(points):
    if len(points) < 2:
        return 0.0
    best = 0.0
    # O(n^2) over contour vertices; contours here are a few hundred points
    for i in range(len(points) - 1):
        d2 = ((points[i + 1 :] - points[i]) ** 2).sum(axis=1).max()
        best = max(best, float(d2))
    return math.sqrt(best)


def shape_features(mask):
    """The 9 shape descriptors, in canonical order.

    Raises MultiComponentMaskError when the mask is not a single 4-connected
    component; callers take the largest component first.
    """
    m = np.asarray(mask, dtype=bool)
    if not m.any():
        raise ValueError("empty mask")
    _, n_comp = backend.label_components(m, 4)
    if n_comp != 1:
        raise MultiComponentMaskError(f"mask has {n_comp} 4-connected components")

    perimeter, mesh_surface, vertices = contour_measurements(m)
    pixel_surface = float(m.sum())
    ratio = perimeter / mesh_surface if mesh_surface > 0 else 0.0
    sphericity = 2.0 * math.sqrt(math.pi * mesh_surface) / perimeter if perimeter > 0 else 0.0
    max_diameter = max_pairwise_distance(vertices)

    rows, cols = np.nonzero(m)
    coords = np.stack([cols, rows], axis=1).astype(np.float64)
    centered = coords - coords.mean(axis=0)
    cov = centered.T @ centered / coords.shape[0]
    eigvals = np.linalg.eigvalsh(cov)
    lam_minor = max(float(eigvals[0]), 0.0)
    lam_major = max(float(eigvals[1]), 0.0)
    major_axis = 4.0 * math.sqrt(lam_major)
    minor_axis = 4.0 * math.sqrt(lam_minor)
    elongation = math.sqrt(lam_minor / lam_major) if lam_major > 0 else 1.0

    return np.array(
        [
            mesh_surface,
            pixel_surface,
            perimeter,
            ratio,
            sphericity,
            max_diameter,
            major_axis,
            minor_axis,
            elongation,
        ],
        dtype=np.float64,
    )
