"""Gray-level discretization of a masked region.

Equal-width binning between the in-mask min and max:
    level(v) = min(floor((v - min) / (max - min) * n_bins) + 1, n_bins)
so the minimum maps to level 1, the maximum to n_bins, and a constant region
collapses to level 1 everywhere.
"""

import numpy as np


class QuantizedRoi:
    """Bounding-box crop with per-pixel levels (0 outside the mask)."""

    def __init__(self, crop, mask_crop, levels, n_bins, origin):
        self.crop = crop
        self.mask_crop = mask_crop
        self.levels = levels
        self.n_bins = n_bins
        self.origin = origin  # (row0, col0) of the crop in the source image

    @property
    def n_pixels(self):
        return int(self.mask_crop.sum())


def quantize(image, mask, n_bins):
    """Discretize in-mask intensities of an image to 1..n_bins."""
    if n_bins < 2:
        raise ValueError(f"n_bins must be >= 2, got {n_bins}")
    mask = np.asarray(mask, dtype=bool)
    if image.shape != mask.shape:
        raise ValueError(f"image {image.shape} and mask {mask.shape} differ")
    if not mask.any():
        raise ValueError("empty mask")
    rows, cols = np.nonzero(mask)
    r0, r1 = rows.min(), rows.max() + 1
    c0, c1 = cols.min(), cols.max() + 1
    crop = np.asarray(image, dtype=np.float64)[r0:r1, c0:c1]
    mask_crop = mask[r0:r1, c0:c1]
    vals = crop[mask_crop]
    vmin, vmax = vals.min(), vals.max()
    levels = np.zeros(crop.shape, dtype=np.int32)
    if vmax > vmin:
        lv = np.floor((crop - vmin) / (vmax - vmin) * n_bins).astype(np.int32) + 1
        np.minimum(lv, n_bins, out=lv)
        levels[mask_crop] = lv[mask_crop]
    else:
        levels[mask_crop] = 1
    return QuantizedRoi(crop, mask_crop, levels, n_bins, (int(r0), int(c0)))
