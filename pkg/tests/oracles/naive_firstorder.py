"""Loop-based reference for the first-order features."""

import math


def _percentile(sorted_vals, q):
    # linear interpolation at position q/100 * (n-1), as numpy's default
    n = len(sorted_vals)
    pos = q / 100.0 * (n - 1)
    lo = int(math.floor(pos))
    hi = min(lo + 1, n - 1)
    frac = pos - lo
    return sorted_vals[lo] + frac * (sorted_vals[hi] - sorted_vals[lo])


def naive_firstorder_features(values, levels, n_bins):
    """values: in-mask intensities; levels: matching 1..n_bins labels."""
    n = len(values)
    vals = sorted(values)

    energy = sum(v * v for v in values)

    hist = [0] * (n_bins + 1)
    for lv in levels:
        hist[lv] += 1
    entropy = 0.0
    uniformity = 0.0
    for k in range(1, n_bins + 1):
        p = hist[k] / n
        uniformity += p * p
        if p > 0:
            entropy -= p * math.log2(p)

    vmin, vmax = vals[0], vals[-1]
    p10 = _percentile(vals, 10)
    p25 = _percentile(vals, 25)
    p50 = _percentile(vals, 50)
    p75 = _percentile(vals, 75)
    p90 = _percentile(vals, 90)
    mean = sum(values) / n
    mad = sum(abs(v - mean) for v in values) / n
    robust = [v for v in values if p10 <= v <= p90]
    if robust:
        rmean = sum(robust) / len(robust)
        rmad = sum(abs(v - rmean) for v in robust) / len(robust)
    else:
        rmad = 0.0
    rms = math.sqrt(energy / n)
    m2 = sum((v - mean) ** 2 for v in values) / n
    m3 = sum((v - mean) ** 3 for v in values) / n
    m4 = sum((v - mean) ** 4 for v in values) / n
    skew = m3 / m2**1.5 if m2 > 0 else 0.0
    kurt = m4 / (m2 * m2) if m2 > 0 else 0.0

    return [
        energy,
        energy,
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
        skew,
        kurt,
        m2,
        uniformity,
    ]
