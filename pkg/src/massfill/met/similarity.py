"""Cosine structure of the feature embedding table."""

import numpy as np

from ..radiomics import GROUP_SLICES


def embedding_similarity(model):
    """(69, 69) cosine similarity between embedding rows."""
    e = model.embeddings.data.astype(np.float64)
    norms = np.linalg.norm(e, axis=1, keepdims=True)
    norms = np.maximum(norms, 1e-12)
    u = e / norms
    return u @ u.T


def block_score(sim):
    """Mean intra-group minus mean inter-group cosine similarity.

    Groups are the canonical feature families (shape, firstorder, glcm,
    glszm, clinical); the diagonal is excluded from the intra mean.
    """
    n = sim.shape[0]
    group_of = np.empty(n, dtype=object)
    for name, slc in GROUP_SLICES.items():
        group_of[slc] = name
    same = group_of[:, None] == group_of[None, :]
    off_diag = ~np.eye(n, dtype=bool)
    intra = sim[same & off_diag].mean()
    inter = sim[~same].mean()
    return float(intra - inter), float(intra), float(inter)
