"""First-order (intensity histogram) statistics over a masked region.

Entropy and Uniformity use the same equal-width discretization as the
texture matrices (the QuantizedRoi levels), log base 2 with 0*log0 = 0.
Variance, Skewness and Kurtosis are population moments; Kurtosis is
non-excess (Gaussian -> 3). Percentiles interpolate linearly.
"""

import numpy as np

FIRSTORDER_FEATURE_COUNT = 18


def firstorder_features(q):
    """The 18 first-order features of a QuantizedRoi, in canonical order."""
    vals = q.crop[q.mask_crop].astype(np.float64)
    n = vals.size
    if n == 0:
        raise ValueError("empty mask")

    energy = float((vals * vals).sum())
    total_energy = energy  # unit pixel spacing
    levels = q.levels[q.mask_crop]
    hist = np.bincount(levels, minlength=q.n_bins + 1)[1:].astype(np.float64)
    p = hist / n
    nz = p[p > 0]
    entropy = float(-(nz * np.log2(nz)).sum())
    uniformity = float((p * p).sum())

    vmin = float(vals.min())
    vmax = float(vals.max())
    p10, p25, p50, p75, p90 = (float(x) for x in np.percentile(vals, [10, 25, 50, 75, 90]))
    mean = float(vals.mean())
    mad = float(np.abs(vals - mean).mean())
    robust = vals[(vals >= p10) & (vals <= p90)]
    rmad = float(np.abs(robust - robust.mean()).mean()) if robust.size else 0.0
    rms = float(np.sqrt(energy / n))
    centered = vals - mean
    m2 = float((centered**2).mean())
    m3 = float((centered**3).mean())
    m4 = float((centered**4).mean())
    skewness = m3 / m2**1.5 if m2 > 0 else 0.0
    kurtosis = m4 / (m2 * m2) if m2 > 0 else 0.0

    return np.array(
        [
            energy,
            total_energy,
            entropy,
            vmin,
            p10,
            p90,
            vmax,
            mean,
            p50,
            p75 - p25,
            vmax - vmin,
            mad,
            rmad,
            rms,
            skewness,
            kurtosis,
            m2,
            uniformity,
        ],
        dtype=np.float64,
    )
