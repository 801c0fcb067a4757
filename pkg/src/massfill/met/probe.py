"""Probe evaluation: does the frozen encoder keep class information?

A logistic regression (L2 penalty, fixed lambda, trained with the package
optimizer) predicts benign vs malignant from the flattened encoder output
with clinical slots masked; the baseline uses the raw 67 radiomics features.
Both are scored with 5-fold cross-validated AUC.
"""

import numpy as np

from .. import rng
from ..nn import Adam, Tape, Tensor, backward, ops
from ..radiomics import BIRADS_SLOT, DENSITY_SLOT, N_RADIOMICS

PROBE_L2 = 1.0
PROBE_LR = 0.05
PROBE_STEPS = 250


def auc_score(scores, labels):
    """Rank-based AUC with tie handling."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes")
    order = np.argsort(scores, kind="mergesort")
    ranks = np.empty(scores.size, dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    while i < scores.size:
        j = i
        while j + 1 < scores.size and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    rank_sum = ranks[labels].sum()
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def train_logistic(x, y, seed, l2=PROBE_L2, lr=PROBE_LR, steps=PROBE_STEPS):
    """Full-batch logistic regression; returns a scoring closure."""
    x = np.asarray(x, dtype=np.float32)
    y = np.asarray(y, dtype=np.float32).reshape(-1, 1)
    n, d = x.shape
    gen = rng.stream(seed, "logistic-init")
    w = Tensor((gen.standard_normal((d, 1)) * 0.01).astype(np.float32), requires_grad=True)
    b = Tensor(np.zeros((1, 1), dtype=np.float32), requires_grad=True)
    opt = Adam({"w": w, "b": b}, lr=lr)
    xt = Tensor(x)
    yt = Tensor(y)
    for _ in range(steps):
        with Tape() as tape:
            logits = ops.add(ops.matmul(xt, w), b)
            data_loss = ops.bce_with_logits(logits, yt)
            penalty = ops.scale(ops.sum_all(ops.mul(w, w)), l2 / (2.0 * n))
            loss = ops.add(data_loss, penalty)
        backward(loss, tape)
        opt.step()
        opt.zero_grad()

    def score(xq):
        return (np.asarray(xq, dtype=np.float32) @ w.data + b.data).ravel()

    return score


def kfold_auc(x, y, seed, folds=5):
    """Mean AUC over seeded folds; also returns the per-fold values."""
    y = np.asarray(y, dtype=bool)
    if y.all() or not y.any():
        raise ValueError("probe needs both classes")
    n = len(y)
    order = rng.stream(seed, "probe-folds").permutation(n)
    aucs = []
    for k in range(folds):
        test_idx = order[k::folds]
        train_idx = np.setdiff1d(order, test_idx, assume_unique=True)
        if y[test_idx].all() or not y[test_idx].any():
            continue  # degenerate fold, skip
        score = train_logistic(x[train_idx], y[train_idx], seed=seed * folds + k)
        aucs.append(auc_score(score(x[test_idx]), y[test_idx]))
    if not aucs:
        raise ValueError("all folds degenerate")
    return float(np.mean(aucs)), aucs


def encode_for_probe(model, vectors, batch_size=256):
    """Flattened encoder outputs with the clinical slots force-masked."""
    vectors = np.asarray(vectors, dtype=np.float32)
    out = []
    for lo in range(0, len(vectors), batch_size):
        ctx = model.encode(vectors[lo : lo + batch_size], masked_slots=(DENSITY_SLOT, BIRADS_SLOT))
        out.append(ctx.data.reshape(ctx.data.shape[0], -1))
    return np.concatenate(out, axis=0)


def probe_eval(model, vectors, labels, seed=0, folds=5):
    """Cross-validated probe and baseline AUCs for benign/malignant labels.

    labels: boolean array, True = malignant. Returns a dict with mean AUCs
    and the per-fold values.
    """
    vectors = np.asarray(vectors, dtype=np.float32)
    labels = np.asarray(labels, dtype=bool)
    encoded = encode_for_probe(model, vectors)
    baseline = vectors[:, :N_RADIOMICS]
    auc_met, folds_met = kfold_auc(encoded, labels, seed=seed, folds=folds)
    auc_base, folds_base = kfold_auc(baseline, labels, seed=seed, folds=folds)
    return {
        "auc_met": auc_met,
        "auc_baseline": auc_base,
        "folds_met": folds_met,
        "folds_baseline": folds_base,
    }
