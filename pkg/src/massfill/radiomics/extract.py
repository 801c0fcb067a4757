"""Full 67-feature extraction for one (image, mask) pair."""

import numpy as np

from .. import backend
from .firstorder import firstorder_features
from .glcm import GlcmPairsError, glcm_features
from .glszm import glszm_features
from .names import GLCM_NAMES, N_RADIOMICS
from .quantize import quantize
from .shape import shape_features

DEFAULT_BINS = 32


def largest_component(mask):
    labels, n = backend.label_components(np.asarray(mask, dtype=bool), 4)
    if n <= 1:
        return np.asarray(mask, dtype=bool)
    sizes = np.bincount(labels.ravel())[1:]
    return labels == (int(sizes.argmax()) + 1)


def extract_all(image, mask, n_bins=DEFAULT_BINS):
    """Concatenated shape/firstorder/glcm/glszm features, canonical order.

    An empty mask is the mass-free case and returns all 67 slots as zero.
    Masks with several components are reduced to the largest 4-connected one
    before any feature is computed, so every family sees the same ROI.
    A pairless ROI (single pixel) gets zeros for the 24 GLCM slots.
    """
    image = np.asarray(image)
    mask = np.asarray(mask, dtype=bool)
    if image.shape != mask.shape:
        raise ValueError(f"image {image.shape} and mask {mask.shape} differ")
    if not mask.any():
        return np.zeros(N_RADIOMICS, dtype=np.float64)
    roi = largest_component(mask)
    q = quantize(image, roi, n_bins)
    shape_f = shape_features(roi)
    first_f = firstorder_features(q)
    try:
        glcm_f = glcm_features(q)
    except GlcmPairsError:
        glcm_f = np.zeros(len(GLCM_NAMES), dtype=np.float64)
    glszm_f = glszm_features(q)
    out = np.concatenate([shape_f, first_f, glcm_f, glszm_f])
    if not np.all(np.isfinite(out)):
        bad = np.nonzero(~np.isfinite(out))[0]
        raise FloatingPointError(f"non-finite features at slots {bad.tolist()}")
    return out
