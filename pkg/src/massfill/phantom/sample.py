"""Paired-breast phantom construction.

Each sample is a breast-shaped textured field (half-ellipse bulging from the
left edge) with an optional rendered mass, plus the mirrored mass-free
render of a sibling stream standing in for the opposite breast. Density
drives base intensity and noise amplitude; malignancy drives boundary
irregularity, spiculation and internal texture so the radiomics features
carry the class signal.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from .. import rng
from .mass import MassParams, render_mass
from .noise import value_noise

DENSITY_PRESETS = {
    "primary": {
        "low": {"base": 0.34, "amp": 0.13},
        "high": {"base": 0.52, "amp": 0.21},
    },
    # shifted distribution for external-adaptation experiments: darker base,
    # coarser and stronger texture
    "shifted": {
        "low": {"base": 0.26, "amp": 0.20},
        "high": {"base": 0.42, "amp": 0.30},
    },
}

MASS_PRESETS = {
    "primary": {
        "benign": {
            "irregularity": (0.05, 0.20),
            "spiculation": (0, 0),
            "contrast": (0.25, 0.40),
            "texture": (0.05, 0.25),
        },
        "malignant": {
            "irregularity": (0.40, 0.60),
            "spiculation": (4, 8),
            "contrast": (0.28, 0.45),
            "texture": (0.45, 0.85),
        },
    },
    "shifted": {
        "benign": {
            "irregularity": (0.05, 0.20),
            "spiculation": (0, 0),
            "contrast": (0.30, 0.48),
            "texture": (0.10, 0.35),
        },
        "malignant": {
            "irregularity": (0.40, 0.60),
            "spiculation": (4, 8),
            "contrast": (0.34, 0.52),
            "texture": (0.50, 0.90),
        },
    },
}

BBOX_MARGIN = 2


@dataclass
class PhantomSample:
    image: np.ndarray
    opposite: np.ndarray
    mask: np.ndarray
    bbox: Optional[tuple]  # (x0, y0, x1, y1) inclusive, None for normals
    density: str
    birads: str
    mass: Optional[MassParams]
    seed: int


def breast_region(size):
    """Binary half-ellipse region, a pure function of the image size."""
    h = w = size
    yy, xx = np.mgrid[:h, :w].astype(np.float64)
    rx, ry = 0.95 * w, 0.48 * h
    return (xx / rx) ** 2 + ((yy - 0.5 * h) / ry) ** 2 <= 1.0


def generate_background(seed, density, size=64, distribution="primary"):
    """Mass-free breast phantom; deterministic per (seed, density, size)."""
    if density not in ("low", "high"):
        raise ValueError(f"unknown density label {density!r}")
    preset = DENSITY_PRESETS[distribution][density]
    gen = rng.stream(seed, "background", density)
    octaves = 3 if distribution == "shifted" else 4
    noise = value_noise(gen, (size, size), base_cells=4, octaves=octaves)
    region = breast_region(size)
    dist = ndimage.distance_transform_edt(region)
    edge = np.clip(dist / 3.0, 0.0, 1.0)
    tissue = preset["base"] + preset["amp"] * noise
    img = 0.02 + edge * (tissue - 0.02)
    return np.clip(img, 0.0, 1.0).astype(np.float32)


def _uniform(gen, lo_hi):
    lo, hi = lo_hi
    return float(gen.uniform(lo, hi))


def draw_mass_params(seed, birads, size=64, distribution="primary"):
    """Class-preset mass parameters placed inside the breast region."""
    preset = MASS_PRESETS[distribution][birads]
    gen = rng.stream(seed, "mass-params", birads)
    major = gen.uniform(0.06, 0.11) * size
    minor = major * gen.uniform(0.55, 0.95)
    major = max(major, 3.0)
    minor = max(minor, 3.0)
    irregularity = _uniform(gen, preset["irregularity"])
    lo, hi = preset["spiculation"]
    spiculation = int(gen.integers(lo, hi + 1))
    contrast = _uniform(gen, preset["contrast"])
    texture = _uniform(gen, preset["texture"])
    detail_seed = int(gen.integers(0, 2**62))

    probe = MassParams(
        center=(size / 2, size / 2),
        major_radius=major,
        minor_radius=minor,
        orientation=float(gen.uniform(0.0, math.pi)),
        irregularity=irregularity,
        spiculation=spiculation,
        contrast=contrast,
        texture=texture,
        detail_seed=detail_seed,
    )
    # place the center where the whole reach fits inside the breast region
    # and away from the image border (the region touches the left edge)
    region = breast_region(size)
    dist = ndimage.distance_transform_edt(region)
    yy, xx = np.mgrid[:size, :size]
    border = np.minimum.reduce([xx, yy, size - 1 - xx, size - 1 - yy])
    need = probe.reach() + BBOX_MARGIN + 2
    ok_rows, ok_cols = np.nonzero((dist >= need) & (border >= need))
    if ok_rows.size == 0:
        raise ValueError(f"mass with reach {probe.reach():.1f} cannot fit in size {size}")
    pick = int(gen.integers(0, ok_rows.size))
    probe.center = (float(ok_cols[pick]), float(ok_rows[pick]))
    return probe


def bbox_from_mask(mask, margin=BBOX_MARGIN):
    rows, cols = np.nonzero(mask)
    h, w = mask.shape
    x0 = int(cols.min()) - margin
    x1 = int(cols.max()) + margin
    y0 = int(rows.min()) - margin
    y1 = int(rows.max()) + margin
    if x0 < 0 or y0 < 0 or x1 >= w or y1 >= h:
        raise ValueError("mask too close to the border for the bbox margin")
    return (x0, y0, x1, y1)


def make_sample(seed, density, birads, size=64, distribution="primary"):
    """Full phantom sample; pure function of its arguments."""
    if birads not in ("normal", "benign", "malignant"):
        raise ValueError(f"unknown birads label {birads!r}")
    background = generate_background(seed, density, size, distribution)
    opposite_bg = generate_background(
        int(rng.derive_key(seed, "opposite-sibling")[0] >> 1), density, size, distribution
    )
    opposite = np.ascontiguousarray(opposite_bg[:, ::-1])

    if birads == "normal":
        mask = np.zeros((size, size), dtype=bool)
        return PhantomSample(background, opposite, mask, None, density, birads, None, seed)

    params = draw_mass_params(seed, birads, size, distribution)
    image, mask = render_mass(background, params)
    bbox = bbox_from_mask(mask)
    return PhantomSample(image, opposite, mask, bbox, density, birads, params, seed)


def random_box(gen, size, lo_frac=0.25, hi_frac=0.5, max_tries=1000):
    """A training box for normal samples: side lengths 25-50% of the image
    side, fully inside the breast region."""
    region = breast_region(size)
    for _ in range(max_tries):
        bw = int(round(gen.uniform(lo_frac, hi_frac) * size))
        bh = int(round(gen.uniform(lo_frac, hi_frac) * size))
        x0 = int(gen.integers(0, size - bw))
        y0 = int(gen.integers(0, size - bh))
        if region[y0 : y0 + bh, x0 : x0 + bw].all():
            return (x0, y0, x0 + bw - 1, y0 + bh - 1)
    # the centered-left quarter always fits
    bw = bh = size // 4
    return (2, size // 2 - bh // 2, 2 + bw - 1, size // 2 + bh - bh // 2 - 1)
