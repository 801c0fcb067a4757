"""Gray-level size-zone features.

A zone is an 8-connected set of pixels sharing one quantized level. The
size-zone matrix P(g, s) counts zones of level g and size s; the 16 features
follow the standard normalized definitions with log base 2.
"""

import numpy as np

from .. import backend

GLSZM_FEATURE_COUNT = 16


def glszm_features(q):
    """The 16 size-zone features of a QuantizedRoi, in canonical order."""
    zl, zs = backend.zone_sizes(q.levels)
    nz = len(zl)
    if nz == 0:
        raise ValueError("empty mask")
    np_pixels = q.n_pixels
    g = zl.astype(np.float64)
    s = zs.astype(np.float64)

    sae = float((1.0 / s**2).sum()) / nz
    lae = float((s**2).sum()) / nz
    gl_counts = np.bincount(zl)[1:].astype(np.float64)
    gln = float((gl_counts**2).sum()) / nz
    glnn = gln / nz
    sz_counts = np.bincount(zs)[1:].astype(np.float64)
    szn = float((sz_counts**2).sum()) / nz
    sznn = szn / nz
    zp = nz / np_pixels

    mu_g = g.mean()
    glv = float(((g - mu_g) ** 2).mean())
    mu_s = s.mean()
    zv = float(((s - mu_s) ** 2).mean())

    # entropy over distinct (level, size) cells
    max_s = int(zs.max())
    cell = zl * (max_s + 1) + zs
    cell_counts = np.bincount(cell)
    pc = cell_counts[cell_counts > 0].astype(np.float64) / nz
    ze = float(-(pc * np.log2(pc)).sum())

    lglze = float((1.0 / g**2).sum()) / nz
    hglze = float((g**2).sum()) / nz
    salgle = float((1.0 / (g**2 * s**2)).sum()) / nz
    sahgle = float((g**2 / s**2).sum()) / nz
    lalgle = float((s**2 / g**2).sum()) / nz
    lahgle = float((g**2 * s**2).sum()) / nz

    return np.array(
        [
            sae,
            lae,
            gln,
            glnn,
            szn,
            sznn,
            zp,
            glv,
            zv,
            ze,
            lglze,
            hglze,
            salgle,
            sahgle,
            lalgle,
            lahgle,
        ],
        dtype=np.float64,
    )
