"""Gray-level co-occurrence features.

Co-occurrences are counted at distance 1 along the four 2D directions
(0, 45, 90, 135 degrees), symmetrized, and normalized per direction. Each of
the 24 features is computed per direction and the results averaged.

Conventions, pinned for bit-reproducibility:
  - levels with zero marginal in a direction's matrix are stripped before
    normalization; gray-level coefficients keep their original bin values;
    the Ng appearing in Idmn/Idn is the stripped level count;
  - log base 2, 0*log0 = 0;
  - Correlation of a degenerate (single-level) matrix is 1; MCC of a
    single-level matrix is 1; Imc1 is 0 when both marginal entropies vanish;
  - directions that contain no pixel pair are skipped in the average; if no
    direction has a pair the ROI has no texture and GlcmPairsError is raised
    (extract_all substitutes zeros).
"""

import numpy as np

from .. import backend

GLCM_FEATURE_COUNT = 24


class GlcmPairsError(ValueError):
    pass


def glcm_matrices(q):
    """Symmetric co-occurrence count matrices, one per direction."""
    return backend.glcm_counts(q.levels, q.n_bins)


def _features_one_direction(counts):
    keep = np.nonzero(counts.sum(axis=1) > 0)[0]
    c = counts[np.ix_(keep, keep)].astype(np.float64)
    p = c / c.sum()
    iv = (keep + 1).astype(np.float64)  # original bin values of kept levels
    ng = len(keep)

    px = p.sum(axis=1)
    mu = float((px * iv).sum())
    sigma2 = float((px * (iv - mu) ** 2).sum())

    ii = iv[:, None]
    jj = iv[None, :]
    autocorr = float((p * ii * jj).sum())
    ipj = ii + jj - 2.0 * mu
    cluster_prom = float((p * ipj**4).sum())
    cluster_shade = float((p * ipj**3).sum())
    cluster_tend = float((p * ipj**2).sum())
    contrast = float((p * (ii - jj) ** 2).sum())
    correlation = (autocorr - mu * mu) / sigma2 if sigma2 > 0 else 1.0

    # difference distribution over |i - j|
    dvals = np.abs(ii - jj).astype(np.int64)
    max_d = int(dvals.max())
    pd = np.bincount(dvals.ravel(), weights=p.ravel(), minlength=max_d + 1)
    ks = np.arange(max_d + 1, dtype=np.float64)
    diff_avg = float((pd * ks).sum())
    nzd = pd[pd > 0]
    diff_entropy = float(-(nzd * np.log2(nzd)).sum())
    diff_var = float((pd * (ks - diff_avg) ** 2).sum())
    ident = float((pd / (1.0 + ks)).sum())
    idm = float((pd / (1.0 + ks**2)).sum())
    idmn = float((pd / (1.0 + (ks / ng) ** 2)).sum())
    idn = float((pd / (1.0 + ks / ng)).sum())
    inverse_var = float((pd[1:] / ks[1:] ** 2).sum()) if max_d >= 1 else 0.0

    # sum distribution over i + j
    svals = (ii + jj).astype(np.int64)
    ps = np.bincount(svals.ravel(), weights=p.ravel())
    sks = np.arange(len(ps), dtype=np.float64)
    sum_avg = float((ps * sks).sum())
    nzs = ps[ps > 0]
    sum_entropy = float(-(nzs * np.log2(nzs)).sum())

    nzp = p[p > 0]
    hxy = float(-(nzp * np.log2(nzp)).sum())
    joint_energy = float((p * p).sum())
    max_prob = float(p.max())

    pxy = px[:, None] * px[None, :]  # symmetric: py == px
    mask_nz = p > 0
    hxy1 = float(-(p[mask_nz] * np.log2(pxy[mask_nz])).sum())
    nz_pxy = pxy[pxy > 0]
    hxy2 = float(-(nz_pxy * np.log2(nz_pxy)).sum())
    nzx = px[px > 0]
    hx = float(-(nzx * np.log2(nzx)).sum())
    imc1 = (hxy - hxy1) / hx if hx > 0 else 0.0
    imc2 = float(np.sqrt(max(0.0, 1.0 - np.exp(-2.0 * (hxy2 - hxy)))))

    if ng == 1:
        mcc = 1.0
    else:
        # Q(i,k) = sum_j p(i,j) p(k,j) / (px(i) py(j))
        q_mat = (p / px[:, None]) @ (p / px[None, :]).T
        eig = np.linalg.eigvals(q_mat)
        eig = np.sort(eig.real)[::-1]
        mcc = float(np.sqrt(max(0.0, eig[1])))

    return np.array(
        [
            autocorr,
            mu,
            cluster_prom,
            cluster_shade,
            cluster_tend,
            contrast,
            correlation,
            diff_avg,
            diff_entropy,
            diff_var,
            ident,
            idm,
            idmn,
            idn,
            imc1,
            imc2,
            inverse_var,
            joint_energy,
            hxy,
            max_prob,
            mcc,
            sum_avg,
            sum_entropy,
            sigma2,
        ],
        dtype=np.float64,
    )


def glcm_features(q):
    """The 24 co-occurrence features of a QuantizedRoi, direction-averaged."""
    counts = glcm_matrices(q)
    per_direction = []
    for d in range(4):
        if counts[d].sum() == 0:
            continue
        per_direction.append(_features_one_direction(counts[d]))
    if not per_direction:
        raise GlcmPairsError("no co-occurring pixel pairs in any direction")
    return np.mean(per_direction, axis=0)
