import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from massfill import rng
from massfill.radiomics import (
    FeatureNormalizer,
    GlcmPairsError,
    MultiComponentMaskError,
    N_RADIOMICS,
    extract_all,
    firstorder_features,
    glcm_features,
    glszm_features,
    quantize,
    shape_features,
)
from massfill.radiomics.glcm import glcm_matrices

from oracles.naive_firstorder import naive_firstorder_features
from oracles.naive_glcm import naive_glcm_features
from oracles.naive_glszm import naive_glszm_features
from oracles.naive_shape import naive_shape_features


def disk_mask(radius, size=None):
    size = size or (2 * radius + 5)
    yy, xx = np.mgrid[:size, :size]
    cy = cx = size / 2.0
    return (yy - cy) ** 2 + (xx - cx) ** 2 <= radius**2


def ellipse_mask(ra, rb, size=None):
    size = size or (2 * max(ra, rb) + 5)
    yy, xx = np.mgrid[:size, :size]
    cy = cx = size / 2.0
    return ((xx - cx) / ra) ** 2 + ((yy - cy) / rb) ** 2 <= 1.0


def random_roi(seed, size=16, blobby=True):
    """A random single-component mask with matching random intensities."""
    gen = rng.stream(seed, "test", "roi")
    img = gen.uniform(0, 1, (size, size))
    if blobby:
        ra = gen.uniform(size * 0.2, size * 0.45)
        rb = gen.uniform(size * 0.2, size * 0.45)
        yy, xx = np.mgrid[:size, :size]
        mask = ((xx - size / 2) / ra) ** 2 + ((yy - size / 2) / rb) ** 2 <= 1.0
        wobble = gen.uniform(0, 1, (size, size)) > 0.15
        from massfill.radiomics import largest_component

        mask = largest_component(mask & wobble)
    else:
        mask = np.ones((size, size), dtype=bool)
    return img.astype(np.float32), mask


# ----------------------------------------------------------------- quantize


def test_quantize_constant_roi_all_level_one():
    img = np.full((4, 4), 0.7, np.float32)
    mask = np.ones((4, 4), bool)
    q = quantize(img, mask, 8)
    assert (q.levels[q.mask_crop] == 1).all()


def test_quantize_three_values_two_bins():
    img = np.array([[0.0, 0.5, 1.0]], np.float32)
    mask = np.ones((1, 3), bool)
    q = quantize(img, mask, 2)
    assert q.levels.tolist() == [[1, 2, 2]]


def test_quantize_max_maps_to_top_bin():
    gen = rng.stream(1, "quantize")
    for _ in range(10):
        img = gen.uniform(0, 1, (6, 6)).astype(np.float32)
        mask = gen.uniform(0, 1, (6, 6)) > 0.3
        if not mask.any():
            continue
        q = quantize(img, mask, 32)
        flat_idx = np.argmax(np.where(mask, img, -np.inf))
        r, c = np.unravel_index(flat_idx, img.shape)
        assert q.levels[r - q.origin[0], c - q.origin[1]] == 32


def test_quantize_empty_mask_errors():
    with pytest.raises(ValueError, match="empty"):
        quantize(np.zeros((4, 4), np.float32), np.zeros((4, 4), bool), 8)


# -------------------------------------------------------------------- shape


def test_disk_sphericity_and_elongation():
    feats = shape_features(disk_mask(20))
    sphericity, elongation = feats[4], feats[8]
    assert 0.95 <= sphericity <= 1.0
    assert 0.95 <= elongation <= 1.0


def test_rectangle_pixel_surface_exact():
    mask = np.zeros((20, 30), bool)
    mask[3:10, 5:20] = True  # 7 x 15
    feats = shape_features(mask)
    assert feats[1] == 7 * 15


def test_ellipse_elongation_half():
    feats = shape_features(ellipse_mask(20, 10))
    assert abs(feats[8] - 0.5) <= 0.05


def test_multi_component_mask_rejected():
    mask = np.zeros((10, 10), bool)
    mask[1:3, 1:3] = True
    mask[6:9, 6:9] = True
    with pytest.raises(MultiComponentMaskError):
        shape_features(mask)


@pytest.mark.parametrize("seed", range(8))
def test_shape_matches_naive_oracle(seed):
    _, mask = random_roi(seed, size=14)
    engine = shape_features(mask)
    naive = naive_shape_features(mask.tolist())
    np.testing.assert_allclose(engine, naive, atol=1e-9, rtol=0)


# --------------------------------------------------------------- firstorder


def test_firstorder_hand_values():
    img = np.array([[1.0, 2.0], [3.0, 4.0]], np.float32)
    mask = np.ones((2, 2), bool)
    f = firstorder_features(quantize(img, mask, 4))
    names_idx = {"Mean": 7, "Range": 10, "Variance": 16}
    assert abs(f[names_idx["Mean"]] - 2.5) < 1e-12
    assert abs(f[names_idx["Range"]] - 3.0) < 1e-12
    assert abs(f[names_idx["Variance"]] - 1.25) < 1e-12


def test_firstorder_constant_roi():
    img = np.full((5, 5), 0.4, np.float32)
    f = firstorder_features(quantize(img, np.ones((5, 5), bool), 16))
    assert f[2] == 0.0  # Entropy
    assert f[17] == 1.0  # Uniformity
    assert f[16] == 0.0  # Variance


@pytest.mark.parametrize("seed", range(8))
def test_firstorder_matches_naive_oracle(seed):
    img, mask = random_roi(seed, size=16)
    q = quantize(img, mask, 32)
    engine = firstorder_features(q)
    naive = naive_firstorder_features(
        list(q.crop[q.mask_crop]), list(q.levels[q.mask_crop]), 32
    )
    np.testing.assert_allclose(engine, naive, atol=1e-9, rtol=0)


# --------------------------------------------------------------------- glcm


def test_glcm_constant_roi_degenerate_values():
    img = np.full((4, 4), 0.3, np.float32)
    f = glcm_features(quantize(img, np.ones((4, 4), bool), 8))
    idx = {"Contrast": 5, "JointEnergy": 17, "JointEntropy": 18, "MaximumProbability": 19}
    assert f[idx["Contrast"]] == 0.0
    assert f[idx["JointEnergy"]] == 1.0
    assert f[idx["MaximumProbability"]] == 1.0
    assert f[idx["JointEntropy"]] == 0.0


def test_glcm_checkerboard_contrast():
    # levels [[1,2],[2,1]]: horizontal and vertical matrices are all
    # off-diagonal (contrast 1 each); both diagonals see a single equal-level
    # pair (contrast 0); the direction average is therefore 0.5
    img = np.array([[0.0, 1.0], [1.0, 0.0]], np.float32)
    mask = np.ones((2, 2), bool)
    q = quantize(img, mask, 2)
    assert q.levels.tolist() == [[1, 2], [2, 1]]
    counts = glcm_matrices(q)
    assert counts[0][0, 0] == 0 and counts[0][1, 1] == 0  # horizontal
    assert counts[2][0, 0] == 0 and counts[2][1, 1] == 0  # vertical
    f = glcm_features(q)
    assert abs(f[5] - 0.5) < 1e-12


def test_glcm_single_pixel_errors():
    img = np.ones((1, 1), np.float32)
    with pytest.raises(GlcmPairsError):
        glcm_features(quantize(img, np.ones((1, 1), bool), 4))


@pytest.mark.parametrize("seed", range(8))
def test_glcm_matches_naive_oracle(seed):
    img, mask = random_roi(seed, size=12)
    q = quantize(img, mask, 16)
    engine = glcm_features(q)
    naive = naive_glcm_features(q.levels.tolist(), 16)
    np.testing.assert_allclose(engine, naive, atol=1e-9, rtol=0)


def test_glcm_rotation_invariance():
    for seed in range(5):
        img, mask = random_roi(seed, size=12)
        f0 = glcm_features(quantize(img, mask, 16))
        f90 = glcm_features(quantize(np.rot90(img).copy(), np.rot90(mask).copy(), 16))
        np.testing.assert_allclose(f0, f90, atol=1e-9, rtol=0)


def test_glcm_matrix_normalization_and_symmetry():
    img, mask = random_roi(3, size=12)
    q = quantize(img, mask, 16)
    for counts in glcm_matrices(q):
        if counts.sum() == 0:
            continue
        p = counts.astype(np.float64) / counts.sum()
        assert abs(p.sum() - 1.0) < 1e-9
        np.testing.assert_allclose(p, p.T, atol=1e-12, rtol=0)


def test_texture_intensity_shift_invariance():
    img, mask = random_roi(4, size=12)
    q0 = quantize(img, mask, 16)
    q1 = quantize(img + 0.25, mask, 16)
    np.testing.assert_allclose(glcm_features(q0), glcm_features(q1), atol=1e-9, rtol=0)
    np.testing.assert_allclose(glszm_features(q0), glszm_features(q1), atol=1e-9, rtol=0)


# -------------------------------------------------------------------- glszm


def test_glszm_constant_roi_single_zone():
    img = np.full((3, 5), 0.2, np.float32)
    mask = np.ones((3, 5), bool)
    f = glszm_features(quantize(img, mask, 8))
    assert abs(f[6] - 1.0 / 15) < 1e-12  # ZonePercentage
    assert abs(f[3] - 1.0) < 1e-12  # GrayLevelNonUniformityNormalized


def test_glszm_two_singleton_zones():
    img = np.array([[0.5, 0.0, 0.5]], np.float32)
    mask = np.array([[True, False, True]])
    f = glszm_features(quantize(img, mask, 4))
    assert abs(f[4] - 2.0) < 1e-12  # SizeZoneNonUniformity = 2^2/2


@pytest.mark.parametrize("seed", range(8))
def test_glszm_matches_naive_oracle(seed):
    img, mask = random_roi(seed, size=14)
    q = quantize(img, mask, 16)
    engine = glszm_features(q)
    naive = naive_glszm_features(q.levels.tolist())
    np.testing.assert_allclose(engine, naive, atol=1e-9, rtol=0)


# --------------------------------------------------------------- extract_all


def test_extract_all_empty_mask_is_zero_vector():
    out = extract_all(np.zeros((8, 8), np.float32), np.zeros((8, 8), bool))
    assert out.shape == (N_RADIOMICS,)
    assert (out == 0).all()


def test_extract_all_finite_and_pure():
    img, mask = random_roi(5, size=20)
    a = extract_all(img, mask)
    b = extract_all(img, mask)
    assert np.isfinite(a).all()
    assert np.array_equal(a, b)


def test_extract_all_takes_largest_component():
    img = rng.stream(9, "lc").uniform(0, 1, (16, 16)).astype(np.float32)
    mask = np.zeros((16, 16), bool)
    mask[2:10, 2:10] = True
    mask[13:15, 13:15] = True  # small distractor
    out = extract_all(img, mask)
    assert out[1] == 64.0  # PixelSurface of the 8x8 block only


# --------------------------------------------------------------- normalizer


def test_normalizer_midpoint_and_constant():
    vecs = np.zeros((2, N_RADIOMICS))
    vecs[0, 0], vecs[1, 0] = 2.0, 4.0
    norm = FeatureNormalizer().fit(vecs)
    probe = np.zeros(N_RADIOMICS)
    probe[0] = 3.0
    out = norm.apply(probe)
    assert abs(out[0] - 0.5) < 1e-12
    assert out[1] == 0.0  # constant feature maps to 0


def test_normalizer_unfitted_apply_errors():
    with pytest.raises(RuntimeError):
        FeatureNormalizer().apply(np.zeros(N_RADIOMICS))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_normalizer_roundtrip_property(seed):
    gen = rng.stream(seed, "norm-roundtrip")
    train = gen.uniform(-5, 5, (8, N_RADIOMICS))
    norm = FeatureNormalizer().fit(train)
    lo, hi = train.min(axis=0), train.max(axis=0)
    x = lo + gen.uniform(0, 1, N_RADIOMICS) * (hi - lo)
    back = norm.invert(norm.apply(x))
    nc = ~norm.constant_mask
    np.testing.assert_allclose(back[nc], x[nc], atol=1e-6)


def test_normalizer_json_roundtrip(tmp_path):
    gen = rng.stream(0, "norm-json")
    norm = FeatureNormalizer().fit(gen.uniform(0, 2, (5, N_RADIOMICS)), fitted_on="abc123")
    p = tmp_path / "norm.json"
    norm.to_json(p)
    norm2 = FeatureNormalizer.from_json(p)
    np.testing.assert_array_equal(norm.vmin, norm2.vmin)
    np.testing.assert_array_equal(norm.vmax, norm2.vmax)
    assert norm2.fitted_on == "abc123"
