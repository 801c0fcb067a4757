"""Pure numpy implementations of the hot kernels.

The compiled extension (massfill._kernels_c) provides the same functions with
identical numerical contracts; massfill.backend picks one set at import time.
im2col/col2im are laid out so both backends feed the exact same GEMM calls,
which keeps results bit-identical across backends.
"""

import numpy as np
from numpy.lib.stride_tricks import as_strided


def im2col(xpad, ksize, stride, out_h, out_w):
    """Patch-extract a padded NCHW batch into (B, C*k*k, out_h*out_w), float32.

    xpad must be C-contiguous. Column order is (c, ky, kx) major, matching the
    weight reshape in the conv wrappers.
    """
    b, c, hp, wp = xpad.shape
    sb, sc, sh, sw = xpad.strides
    view = as_strided(
        xpad,
        shape=(b, c, ksize, ksize, out_h, out_w),
        strides=(sb, sc, sh, sw, sh * stride, sw * stride),
    )
    cols = np.ascontiguousarray(view)
    return cols.reshape(b, c * ksize * ksize, out_h * out_w)


def col2im_add(dcols, ksize, stride, xpad_shape):
    """Scatter-add (B, C*k*k, out_h*out_w) gradients back to padded input shape.

    Accumulation order is (ky, kx)-major, the same order the compiled kernel
    uses, so both backends produce bit-identical sums.
    """
    b, c, hp, wp = xpad_shape
    out_h = (hp - ksize) // stride + 1
    out_w = (wp - ksize) // stride + 1
    d6 = dcols.reshape(b, c, ksize, ksize, out_h, out_w)
    dxpad = np.zeros(xpad_shape, dtype=np.float32)
    for ky in range(ksize):
        for kx in range(ksize):
            dxpad[
                :,
                :,
                ky : ky + out_h * stride : stride,
                kx : kx + out_w * stride : stride,
            ] += d6[:, :, ky, kx]
    return dxpad


# offsets (dr, dc) for GLCM angles 0, 45, 90, 135 degrees
GLCM_OFFSETS = ((0, 1), (-1, 1), (-1, 0), (-1, -1))


def glcm_counts(levels, n_levels):
    """Symmetric co-occurrence counts at distance 1 for the four 2D angles.

    levels: int32 grid, 0 outside the mask, 1..n_levels inside.
    Returns int64 array (4, n_levels, n_levels).
    """
    h, w = levels.shape
    counts = np.zeros((4, n_levels, n_levels), dtype=np.int64)
    for d, (dr, dc) in enumerate(GLCM_OFFSETS):
        r0, r1 = max(0, -dr), min(h, h - dr)
        c0, c1 = max(0, -dc), min(w, w - dc)
        a = levels[r0:r1, c0:c1]
        b = levels[r0 + dr : r1 + dr, c0 + dc : c1 + dc]
        valid = (a > 0) & (b > 0)
        ia = a[valid].astype(np.int64) - 1
        ib = b[valid].astype(np.int64) - 1
        flat = np.bincount(ia * n_levels + ib, minlength=n_levels * n_levels)
        m = flat.reshape(n_levels, n_levels)
        counts[d] = m + m.T
    return counts


def zone_sizes(levels):
    """Sizes of 8-connected constant-level zones.

    levels: int32 grid, 0 outside the mask.
    Returns (zone_levels, zone_sizes) as int64 arrays, one entry per zone,
    sorted by (level, size) so the output is traversal-order independent.
    """
    from scipy import ndimage

    structure = np.ones((3, 3), dtype=bool)
    out_levels = []
    out_sizes = []
    for g in np.unique(levels):
        if g <= 0:
            continue
        lab, n = ndimage.label(levels == g, structure=structure)
        if n == 0:
            continue
        sizes = np.bincount(lab.ravel())[1:]
        out_levels.extend([int(g)] * n)
        out_sizes.extend(int(s) for s in sizes)
    pairs = sorted(zip(out_levels, out_sizes))
    if not pairs:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    lv, sz = zip(*pairs)
    return np.asarray(lv, dtype=np.int64), np.asarray(sz, dtype=np.int64)


def label_components(mask, connectivity):
    """Label connected components of a boolean mask (4- or 8-connectivity).

    Returns (labels int32 grid with 0 background, component count).
    """
    from scipy import ndimage

    if connectivity == 4:
        structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
    elif connectivity == 8:
        structure = np.ones((3, 3), dtype=bool)
    else:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    lab, n = ndimage.label(mask, structure=structure)
    return lab.astype(np.int32), int(n)
